//! Mass, mass mod p, and the flat norms `F` and `F_p` with witness decompositions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::complex::{check_modulus, reduce_coeff, Chain, WeightedComplex};
use crate::error::{Error, Result};
use crate::number::{format_q, q_int, ExactReal, Q};
use crate::optimize::{solve_ilp, LinearProgram, LpOutcome, Relation, DEFAULT_NODE_LIMIT};

/// Per-simplex mass contributions `weight(σ)·|coeff(σ)|` of a chain.
#[derive(Debug, Clone)]
pub struct MassMeasure {
    complex: Arc<WeightedComplex>,
    dim: usize,
    atoms: BTreeMap<usize, Q>,
}

impl MassMeasure {
    pub fn of(chain: &Chain) -> Result<MassMeasure> {
        let w = chain.complex().weights(chain.dim())?;
        let atoms = chain.iter().map(|(i, c)| (i, &w[i] * q_int(c.abs()))).collect();
        Ok(MassMeasure { complex: chain.complex().clone(), dim: chain.dim(), atoms })
    }

    /// Measure of the reduction mod `p`.
    pub fn of_mod_p(chain: &Chain, p: i64) -> Result<MassMeasure> {
        MassMeasure::of(&chain.reduce_mod_p(p)?)
    }

    pub fn complex(&self) -> &Arc<WeightedComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total(&self) -> Q {
        self.atoms.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `(simplex index, contribution)` pairs with positive contribution.
    pub fn atoms(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.atoms.iter().map(|(&i, q)| (i, q))
    }

    /// Measure of the set of simplices selected by `keep`.
    pub fn restricted_total(&self, mut keep: impl FnMut(usize) -> bool) -> Q {
        self.atoms.iter().filter(|(&i, _)| keep(i)).map(|(_, q)| q).sum()
    }
}

pub fn mass(chain: &Chain) -> Result<Q> {
    let w = chain.complex().weights(chain.dim())?;
    Ok(chain.iter().map(|(i, c)| &w[i] * q_int(c.abs())).sum())
}

/// `mass(reduce_mod_p(T, p))`.
pub fn mass_p(chain: &Chain, p: i64) -> Result<Q> {
    mass(&chain.reduce_mod_p(p)?)
}

/// Chain with rational coefficients, used for LP-relaxation witnesses.
#[derive(Debug, Clone)]
pub struct RationalChain {
    complex: Arc<WeightedComplex>,
    dim: usize,
    coeffs: BTreeMap<usize, Q>,
}

impl PartialEq for RationalChain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex) && self.dim == other.dim && self.coeffs == other.coeffs
    }
}

impl RationalChain {
    pub fn zero(complex: &Arc<WeightedComplex>, dim: usize) -> Self {
        RationalChain { complex: complex.clone(), dim, coeffs: BTreeMap::new() }
    }

    pub fn from_chain(chain: &Chain) -> Self {
        RationalChain {
            complex: chain.complex().clone(),
            dim: chain.dim(),
            coeffs: chain.iter().map(|(i, c)| (i, q_int(c))).collect(),
        }
    }

    fn add_at(&mut self, i: usize, c: &Q) {
        let e = self.coeffs.entry(i).or_default();
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mass(&self) -> Result<Q> {
        let w = self.complex.weights(self.dim)?;
        Ok(self.coeffs.iter().map(|(&i, c)| &w[i] * c.abs()).sum())
    }

    pub fn boundary(&self) -> Result<RationalChain> {
        if self.dim == 0 {
            return Err(Error::ZeroDimensionalBoundary);
        }
        let mut out = RationalChain::zero(&self.complex, self.dim - 1);
        for (&i, c) in &self.coeffs {
            for (j, &f) in self.complex.faces(self.dim, i).iter().enumerate() {
                if j % 2 == 0 {
                    out.add_at(f, c);
                } else {
                    out.add_at(f, &-c);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RationalChain) -> RationalChain {
        let mut out = self.clone();
        for (i, c) in other.iter() {
            out.add_at(i, c);
        }
        out
    }

    /// Integer chain if every coefficient is integral.
    pub fn to_chain(&self) -> Option<Chain> {
        let terms: Option<Vec<(usize, i64)>> =
            self.coeffs.iter().map(|(&i, c)| c.is_integer().then(|| c.to_integer().to_i64()).flatten().map(|c| (i, c))).collect();
        Chain::from_indices(&self.complex, self.dim, None, terms?).ok()
    }

    pub fn to_json(&self) -> RationalChainJson {
        RationalChainJson {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .map(|(&i, c)| (self.complex.simplex(self.dim, i).vertices().to_vec(), format_q(c)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalChainJson {
    pub dim: usize,
    pub coeffs: Vec<(Vec<usize>, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Integer `S` (and `Q`), solved by branch-and-bound.
    #[default]
    Exact,
    /// Real `S`; `Q` stays integer in the mod-p problem.
    Relaxed,
}

/// Witness `T = R + ∂S (+ pQ)` certifying a flat-norm value.
#[derive(Debug, Clone)]
pub struct FlatDecomposition {
    pub value: Q,
    pub r: RationalChain,
    pub s: RationalChain,
    pub q: Option<Chain>,
    pub modulus: Option<i64>,
    pub relaxed: bool,
}

impl FlatDecomposition {
    /// Recomputes `R + ∂S + pQ` and the value, comparing against `t`.
    pub fn verify(&self, t: &Chain) -> Result<()> {
        let mut sum = self.r.add(&self.s.boundary()?);
        if let (Some(q), Some(p)) = (&self.q, self.modulus) {
            sum = sum.add(&RationalChain::from_chain(&q.scale(p)));
        }
        if sum != RationalChain::from_chain(&t.lift()) {
            return Err(Error::Certificate("R + ∂S + pQ differs from T".into()));
        }
        let value = self.r.mass()? + self.s.mass()?;
        if value != self.value {
            return Err(Error::Certificate(format!("value {} but M(R) + M(S) = {}", self.value, value)));
        }
        Ok(())
    }

    pub fn report(&self) -> FlatReport {
        FlatReport {
            value: ExactReal::from(&self.value),
            r: self.r.to_json(),
            s: self.s.to_json(),
            q: self.q.as_ref().map(|q| q.to_json()),
            relaxed: self.relaxed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlatReport {
    pub value: ExactReal,
    #[serde(rename = "R")]
    pub r: RationalChainJson,
    #[serde(rename = "S")]
    pub s: RationalChainJson,
    #[serde(rename = "Q")]
    pub q: Option<crate::complex::ChainJson>,
    pub relaxed: bool,
}

/// Flat norm `min M(R) + M(S)` over `T = R + ∂S`, within the complex.
///
/// A chain carrying a modulus is read through its stored representatives.
pub fn flat_norm(t: &Chain, mode: Mode) -> Result<FlatDecomposition> {
    solve_flat(t, None, mode)
}

/// Flat norm mod p: additionally minimizes over integer `Q` in `T − pQ`.
pub fn flat_norm_mod_p(t: &Chain, p: i64, mode: Mode) -> Result<FlatDecomposition> {
    check_modulus(p)?;
    solve_flat(t, Some(p), mode)
}

fn solve_flat(t: &Chain, p: Option<i64>, mode: Mode) -> Result<FlatDecomposition> {
    let complex = t.complex();
    let k = t.dim();
    let t = t.lift();
    let nk = complex.count(k);
    let ns = complex.count(k + 1);
    let wk = complex.weights(k)?;
    let ws = complex.weights(k + 1)?;
    let l1: i64 = t.iter().map(|(_, c)| c.abs()).sum();
    let s_box = q_int(l1);
    let q_box = p.map(|p| q_int((t.max_abs_coeff() + p - 1) / p + 1));
    let zero = Q::zero();

    if let (Some(p), Mode::Exact) = (p, mode) {
        if let Some(s) = search_mod_p(&t, p, SEARCH_NODE_LIMIT)? {
            return decomposition_from_s(&t, p, &s);
        }
    }

    let mut lp = LinearProgram::new();
    let mut integer = Vec::new();
    let r_vars: Vec<(usize, usize)> = (0..nk)
        .map(|i| {
            let a = lp.add_var(wk[i].clone(), Some(zero.clone()), None);
            let b = lp.add_var(wk[i].clone(), Some(zero.clone()), None);
            integer.extend([false, false]);
            (a, b)
        })
        .collect();
    let s_vars: Vec<(usize, usize)> = (0..ns)
        .map(|i| {
            let a = lp.add_var(ws[i].clone(), Some(zero.clone()), Some(s_box.clone()));
            let b = lp.add_var(ws[i].clone(), Some(zero.clone()), Some(s_box.clone()));
            integer.extend([mode == Mode::Exact; 2]);
            (a, b)
        })
        .collect();
    let q_vars: Vec<usize> = match &q_box {
        Some(b) => (0..nk)
            .map(|_| {
                integer.push(true);
                lp.add_var(zero.clone(), Some(-b.clone()), Some(b.clone()))
            })
            .collect(),
        None => Vec::new(),
    };
    let mut rows: Vec<Vec<(usize, Q)>> = r_vars.iter().map(|&(a, b)| vec![(a, q_int(1)), (b, q_int(-1))]).collect();
    for (si, &(a, b)) in s_vars.iter().enumerate() {
        for (j, &f) in complex.faces(k + 1, si).iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            rows[f].push((a, q_int(sign)));
            rows[f].push((b, q_int(-sign)));
        }
    }
    if let Some(p) = p {
        for (i, &qv) in q_vars.iter().enumerate() {
            rows[i].push((qv, q_int(p)));
        }
    }
    for (i, row) in rows.into_iter().enumerate() {
        lp.add_row(row, Relation::Eq, q_int(t.coeff(i)));
    }

    // S = 0 with Q the nearest multiple is always feasible
    let mut start = vec![Q::zero(); lp.var_count()];
    for (i, &(a, b)) in r_vars.iter().enumerate() {
        let c = t.coeff(i);
        let (rc, qc) = match p {
            Some(p) => {
                let r = reduce_coeff(c, p);
                (r, (c - r) / p)
            }
            None => (c, 0),
        };
        if rc > 0 {
            start[a] = q_int(rc);
        } else {
            start[b] = q_int(-rc);
        }
        if p.is_some() {
            start[q_vars[i]] = q_int(qc);
        }
    }

    let needs_ilp = integer.iter().any(|&b| b);
    let (value, x) = if needs_ilp {
        let sol = solve_ilp(&lp, &integer, Some(start), DEFAULT_NODE_LIMIT)?
            .ok_or_else(|| Error::Solver("flat norm problem has no integer point".into()))?;
        (sol.value, sol.x)
    } else {
        match lp.solve()? {
            LpOutcome::Optimal { value, x } => (value, x),
            other => return Err(Error::Solver(format!("flat norm LP ended as {other:?}"))),
        }
    };

    let mut r = RationalChain::zero(complex, k);
    for (i, &(a, b)) in r_vars.iter().enumerate() {
        r.add_at(i, &(&x[a] - &x[b]));
    }
    let mut s = RationalChain::zero(complex, k + 1);
    for (i, &(a, b)) in s_vars.iter().enumerate() {
        s.add_at(i, &(&x[a] - &x[b]));
    }
    let q = match p {
        Some(_) => {
            let terms: Vec<(usize, i64)> = q_vars
                .iter()
                .enumerate()
                .map(|(i, &v)| (i, x[v].to_integer().to_i64().unwrap_or(0)))
                .collect();
            Some(Chain::from_indices(complex, k, None, terms)?)
        }
        None => None,
    };
    let dec = FlatDecomposition { value, r, s, q, modulus: p, relaxed: mode == Mode::Relaxed };
    dec.verify(&t)?;
    Ok(dec)
}

/// Node cap for [`search_mod_p`] before falling back to branch-and-bound on the LP.
const SEARCH_NODE_LIMIT: usize = 20_000_000;

/// Weights scaled to integers over a common denominator, if they fit comfortably.
fn scaled_weights(ws: &[&[Q]]) -> Option<Vec<Vec<i128>>> {
    use num_integer::Integer;
    let denom = ws.iter().flat_map(|w| w.iter()).fold(num_bigint::BigInt::from(1), |acc, w| acc.lcm(w.denom()));
    ws.iter()
        .map(|w| {
            w.iter()
                .map(|x| (x.numer() * (&denom / x.denom())).to_i128().filter(|v| v.abs() < 1 << 90))
                .collect::<Option<Vec<_>>>()
        })
        .collect()
}

/// Exact mod-p flat norm by depth-first search over `S`.
///
/// Replacing `S` by `S − pA` moves `p∂A` into `Q` and never increases
/// `M(S)`, so each coefficient of an optimal `S` can be taken in
/// `(−p/2, p/2]`; for fixed `S` the best `Q` reduces each face separately.
/// A face's cost is final once its last coface is fixed, which gives the
/// lower bound for pruning. Returns `None` if the weights do not scale to
/// machine integers or the node cap is hit.
fn search_mod_p(t: &Chain, p: i64, node_limit: usize) -> Result<Option<Vec<i64>>> {
    let complex = t.complex();
    let k = t.dim();
    let (nk, ns) = (complex.count(k), complex.count(k + 1));
    let Some(w) = scaled_weights(&[complex.weights(k)?, complex.weights(k + 1)?]) else { return Ok(None) };
    let (wf, wt) = (&w[0], &w[1]);
    let mut settle = vec![Vec::new(); ns + 1];
    let mut last = vec![0usize; nk];
    for j in 0..ns {
        for &f in complex.faces(k + 1, j) {
            last[f] = j + 1;
        }
    }
    for (f, &j) in last.iter().enumerate() {
        settle[j].push(f);
    }
    // coefficients in (−p/2, p/2], smallest magnitude first
    let mut values = vec![0i64];
    for m in 1..=p / 2 {
        values.push(m);
        if 2 * m < p {
            values.push(-m);
        }
    }

    struct Dfs<'a> {
        complex: &'a WeightedComplex,
        k: usize,
        p: i64,
        wf: &'a [i128],
        wt: &'a [i128],
        settle: &'a [Vec<usize>],
        values: &'a [i64],
        residual: Vec<i64>,
        s: Vec<i64>,
        best: i128,
        best_s: Vec<i64>,
        nodes: usize,
        limit: usize,
    }
    impl Dfs<'_> {
        fn cost(&self, f: usize) -> i128 {
            self.wf[f] * reduce_coeff(self.residual[f], self.p).abs() as i128
        }
        fn shift(&mut self, j: usize, c: i64) {
            for (i, &f) in self.complex.faces(self.k + 1, j).iter().enumerate() {
                self.residual[f] -= if i % 2 == 0 { c } else { -c };
            }
        }
        fn go(&mut self, j: usize, partial: i128) -> bool {
            self.nodes += 1;
            if self.nodes > self.limit {
                return false;
            }
            if j == self.s.len() {
                if partial < self.best {
                    self.best = partial;
                    self.best_s = self.s.clone();
                }
                return true;
            }
            for &c in self.values {
                let own = self.wt[j] * c.abs() as i128;
                if partial + own >= self.best {
                    break;
                }
                self.shift(j, c);
                self.s[j] = c;
                let settled: i128 = self.settle[j + 1].iter().map(|&f| self.cost(f)).sum();
                let ok = partial + own + settled >= self.best || self.go(j + 1, partial + own + settled);
                self.shift(j, -c);
                self.s[j] = 0;
                if !ok {
                    return false;
                }
            }
            true
        }
    }

    let residual: Vec<i64> = (0..nk).map(|i| t.coeff(i)).collect();
    let mut dfs = Dfs {
        complex,
        k,
        p,
        wf,
        wt,
        settle: &settle,
        values: &values,
        residual,
        s: vec![0; ns],
        best: 0,
        best_s: vec![0; ns],
        nodes: 0,
        limit: node_limit,
    };
    dfs.best = (0..nk).map(|f| dfs.cost(f)).sum::<i128>() + 1;
    let base: i128 = settle[0].iter().map(|&f| dfs.cost(f)).sum();
    if !dfs.go(0, base) {
        return Ok(None);
    }
    Ok(Some(dfs.best_s))
}

/// `R = (T − ∂S)` reduced mod `p`, `Q = (T − ∂S − R) / p`.
fn decomposition_from_s(t: &Chain, p: i64, s_coeffs: &[i64]) -> Result<FlatDecomposition> {
    let complex = t.complex();
    let k = t.dim();
    let s = Chain::from_indices(complex, k + 1, None, s_coeffs.iter().enumerate().map(|(i, &c)| (i, c)))?;
    let rest = t.sub(&s.boundary()?)?;
    let mut r = RationalChain::zero(complex, k);
    let mut q = Vec::new();
    for (i, c) in rest.iter() {
        let red = reduce_coeff(c, p);
        r.add_at(i, &q_int(red));
        q.push((i, (c - red) / p));
    }
    let s = RationalChain::from_chain(&s);
    let value = r.mass()? + s.mass()?;
    let dec = FlatDecomposition {
        value,
        r,
        s,
        q: Some(Chain::from_indices(complex, k, None, q)?),
        modulus: Some(p),
        relaxed: false,
    };
    dec.verify(t)?;
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{q_frac, q_sqrt};

    fn triangle() -> Arc<WeightedComplex> {
        Arc::new(
            WeightedComplex::builder(3)
                .coords(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])
                .simplex(&[0, 1, 2])
                .build()
                .unwrap(),
        )
    }

    #[test]
    fn masses() {
        let k = triangle();
        let e = Chain::from_terms(&k, 1, None, &[([0, 1], 3)]).unwrap();
        assert_eq!(mass(&e).unwrap(), q_int(3));
        assert_eq!(mass_p(&e, 2).unwrap(), q_int(1));
        assert_eq!(mass_p(&e.scale(2), 4).unwrap(), q_int(2));
        assert!(mass_p(&e, 1).is_err());
    }

    #[test]
    fn triangle_boundary_fills_with_face() {
        let k = triangle();
        let t = Chain::simplex(&k, &[0, 1, 2]).unwrap().boundary().unwrap();
        let perimeter = q_int(2) + q_sqrt(&q_int(2)).unwrap();
        let d = flat_norm(&t, Mode::Exact).unwrap();
        assert_eq!(d.value, q_frac(1, 2));
        assert!(d.value < perimeter);
        let d = flat_norm_mod_p(&t, 2, Mode::Exact).unwrap();
        assert_eq!(d.value, q_frac(1, 2));
        let d = flat_norm(&t, Mode::Relaxed).unwrap();
        assert_eq!(d.value, q_frac(1, 2));
    }

    #[test]
    fn multiple_of_p_is_flat_zero() {
        let k = triangle();
        let t = Chain::from_terms(&k, 1, None, &[([0, 1], 2)]).unwrap();
        let d = flat_norm_mod_p(&t, 2, Mode::Exact).unwrap();
        assert_eq!(d.value, q_int(0));
        assert_eq!(d.q.unwrap(), Chain::from_terms(&k, 1, None, &[([0, 1], 1)]).unwrap());
    }

    #[test]
    fn zero_chain() {
        let k = triangle();
        let d = flat_norm(&Chain::zero(&k, 1, None), Mode::Exact).unwrap();
        assert!(d.value.is_zero() && d.r.is_zero() && d.s.is_zero());
    }

    #[test]
    fn top_dimension_has_no_filling() {
        let k = triangle();
        let t = Chain::simplex(&k, &[0, 1, 2]).unwrap().scale(2);
        assert_eq!(flat_norm(&t, Mode::Exact).unwrap().value, q_int(1));
    }
}
