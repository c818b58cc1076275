use std::sync::Arc;

use num_traits::ToPrimitive;

use super::certificate::{ambient_metric, FillingCertificate};
use super::cone::{cone_fill, ConeFill};
use super::decompose::{decompose_cycle, Decomposition};
use crate::complex::{check_modulus, Chain, WeightedComplex};
use crate::error::{Error, Result};
use crate::gf2::{min_weight_solution, solve_system, BitVec};
use crate::metric::FiniteMetricSpace;
use crate::number::{q_int, Q};
use crate::optimize::{solve_ilp, LinearProgram, Relation, DEFAULT_NODE_LIMIT};

/// Node budget for the exact mod-2 minimum-weight search.
pub const DEFAULT_FILL_NODE_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FillMode {
    #[default]
    Exact,
    Greedy,
}

/// Filling assembled from cones over the pieces of a decomposition.
#[derive(Debug, Clone)]
pub struct IsoperimetricFill {
    pub certificate: FillingCertificate,
    pub decomposition: Option<Decomposition>,
    pub cones: Vec<ConeFill>,
}

fn check_cycle(l: &Chain, p: i64) -> Result<Chain> {
    check_modulus(p)?;
    let l = l.reduce_mod_p(p)?;
    if l.dim() > 0 && !l.boundary()?.is_zero() {
        return Err(Error::NotACycle(p));
    }
    Ok(l)
}

/// Decomposes `L` and cones each piece at its ball center.
///
/// Any remainder left after the round cap is coned at its first vertex.
pub fn isoperimetric_fill(l: &Chain, p: i64) -> Result<IsoperimetricFill> {
    let metric = ambient_metric(l.complex())?;
    isoperimetric_fill_with(l, p, &metric)
}

pub fn isoperimetric_fill_with(l: &Chain, p: i64, metric: &FiniteMetricSpace) -> Result<IsoperimetricFill> {
    let l = check_cycle(l, p)?;
    let complex = l.complex();
    let mut t = Chain::zero(complex, l.dim() + 1, Some(p));
    if l.is_zero() {
        let certificate = FillingCertificate::new(&l, &t, p, metric, true)?;
        return Ok(IsoperimetricFill { certificate, decomposition: None, cones: Vec::new() });
    }
    let dec = decompose_cycle(&l, p, metric)?;
    let mut cones = Vec::with_capacity(dec.pieces.len() + 1);
    for piece in &dec.pieces {
        cones.push(cone_fill(&piece.chain, piece.center, metric)?);
    }
    if !dec.remainder.is_zero() {
        let apex = dec.remainder.support_vertices()[0];
        cones.push(cone_fill(&dec.remainder, apex, metric)?);
    }
    for c in &cones {
        t = t.add(&c.t)?;
    }
    let certificate = FillingCertificate::new(&l, &t, p, metric, false)?;
    Ok(IsoperimetricFill { certificate, decomposition: Some(dec), cones })
}

/// Smallest-mass filling (exact) or the isoperimetric filling (greedy).
///
/// The exact mod-2 problem is a minimum-weight search over the solution
/// coset of the GF(2) system; other moduli use branch-and-bound. When the
/// mod-2 search exhausts its node budget the best filling found is returned
/// with `optimal = false`.
pub fn filling_volume(l: &Chain, p: i64, mode: FillMode) -> Result<FillingCertificate> {
    let metric = ambient_metric(l.complex())?;
    match mode {
        FillMode::Greedy => Ok(isoperimetric_fill_with(l, p, &metric)?.certificate),
        FillMode::Exact if p == 2 => exact_fill_gf2(l, &metric, DEFAULT_FILL_NODE_LIMIT),
        FillMode::Exact => exact_fill_ilp(l, p, &metric),
    }
}

pub fn exact_fill_gf2(l: &Chain, metric: &FiniteMetricSpace, node_limit: usize) -> Result<FillingCertificate> {
    let l = check_cycle(l, 2)?;
    let complex: &Arc<WeightedComplex> = l.complex();
    let k = l.dim();
    let rows = complex.count(k);
    let columns: Vec<BitVec> =
        (0..complex.count(k + 1)).map(|i| BitVec::from_ones(rows, complex.faces(k + 1, i).iter().copied())).collect();
    let target = BitVec::from_ones(rows, l.support());
    let sys = solve_system(&columns, rows, &target);
    let x0 = sys.particular.ok_or(Error::NotNullHomologous(2))?;
    let weights = complex.weights(k + 1)?;
    let best = min_weight_solution(&x0, &sys.null_basis, weights, node_limit);
    let t = Chain::from_indices(complex, k + 1, Some(2), best.x.ones().map(|j| (j, 1)))?;
    FillingCertificate::new(&l, &t, 2, metric, best.exact)
}

fn exact_fill_ilp(l: &Chain, p: i64, metric: &FiniteMetricSpace) -> Result<FillingCertificate> {
    let l = check_cycle(l, p)?;
    let complex = l.complex();
    let k = l.dim();
    let nk = complex.count(k);
    let nt = complex.count(k + 1);
    let w = complex.weights(k + 1)?;
    let half = q_int(p / 2);
    let q_box = q_int((k as i64 + 2) * (p / 2) / p + l.max_abs_coeff() / p + 2);
    let zero = q_int(0);
    let mut lp = LinearProgram::new();
    let mut integer = Vec::new();
    let t_vars: Vec<(usize, usize)> = (0..nt)
        .map(|i| {
            integer.extend([true, true]);
            (
                lp.add_var(w[i].clone(), Some(zero.clone()), Some(half.clone())),
                lp.add_var(w[i].clone(), Some(zero.clone()), Some(half.clone())),
            )
        })
        .collect();
    let q_vars: Vec<usize> = (0..nk)
        .map(|_| {
            integer.push(true);
            lp.add_var(zero.clone(), Some(-q_box.clone()), Some(q_box.clone()))
        })
        .collect();
    let mut rows: Vec<Vec<(usize, Q)>> = q_vars.iter().map(|&q| vec![(q, q_int(-p))]).collect();
    for (i, &(a, b)) in t_vars.iter().enumerate() {
        for (j, &f) in complex.faces(k + 1, i).iter().enumerate() {
            let s = if j % 2 == 0 { 1 } else { -1 };
            rows[f].push((a, q_int(s)));
            rows[f].push((b, q_int(-s)));
        }
    }
    for (i, row) in rows.into_iter().enumerate() {
        lp.add_row(row, Relation::Eq, q_int(l.coeff(i)));
    }
    let sol = solve_ilp(&lp, &integer, None, DEFAULT_NODE_LIMIT)?.ok_or(Error::NotNullHomologous(p))?;
    let terms = t_vars.iter().enumerate().map(|(i, &(a, b))| {
        let c = (&sol.x[a] - &sol.x[b]).to_integer().to_i64().unwrap_or(0);
        (i, c)
    });
    let t = Chain::from_indices(complex, k + 1, Some(p), terms.collect::<Vec<_>>())?;
    FillingCertificate::new(&l, &t, p, metric, true)
}
