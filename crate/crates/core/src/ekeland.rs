//! Penalized local search for near-minimal fillings, with density and
//! support-distance monitoring.

use std::sync::Arc;

use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{check_modulus, reduce_coeff, Chain, ChainJson};
use crate::error::{Error, Result};
use crate::flatnorm::mass_p;
use crate::metric::FiniteMetricSpace;
use crate::number::{q_frac, q_int, q_to_f64, ExactReal, Q};

pub use crate::filling::support_distance;

/// Search settings for [`quasi_minimize`].
#[derive(Debug, Clone)]
pub struct EkelandParams {
    pub epsilon: Q,
    /// Shuffles the move order; `None` scans moves by simplex index.
    pub order_seed: Option<u64>,
}

impl Default for EkelandParams {
    fn default() -> Self {
        EkelandParams { epsilon: q_frac(1, 2), order_seed: None }
    }
}

#[derive(Debug, Clone)]
pub struct QuasiMinimizer {
    pub s: Chain,
    pub l: Chain,
    pub p: i64,
    pub epsilon: Q,
    pub seed_mass: Q,
    pub mass: Q,
    /// Objective after each accepted move, and `mass_p(S)` at the start of
    /// each round; strictly decreasing.
    pub trace: Vec<Q>,
    pub rounds: usize,
    pub accepted: usize,
    /// Moves checked for the final local certificate.
    pub certified_moves: usize,
    /// Smallest `mass_p(S + m) + ε mass_p(m) − mass_p(S)` over those moves.
    pub certificate_slack: Option<Q>,
}

impl QuasiMinimizer {
    /// `(1 + ε) / (1 − ε)`, the mass bound relative to the seed.
    pub fn bound_factor(&self) -> Q {
        (Q::one() + &self.epsilon) / (Q::one() - &self.epsilon)
    }

    pub fn within_bound(&self) -> bool {
        self.mass <= self.bound_factor() * &self.seed_mass
    }

    pub fn report(&self) -> EkelandReport {
        EkelandReport {
            filling: self.s.to_json(),
            p: self.p,
            epsilon: ExactReal::from(&self.epsilon),
            seed_mass: ExactReal::from(&self.seed_mass),
            mass: ExactReal::from(&self.mass),
            trace: self.trace.iter().map(ExactReal::from).collect(),
            rounds: self.rounds,
            accepted: self.accepted,
            certified_moves: self.certified_moves,
            certificate_slack: self.certificate_slack.as_ref().map(ExactReal::from),
            bound_factor: ExactReal::from(&self.bound_factor()),
            within_bound: self.within_bound(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EkelandReport {
    pub filling: ChainJson,
    pub p: i64,
    pub epsilon: ExactReal,
    pub seed_mass: ExactReal,
    pub mass: ExactReal,
    pub trace: Vec<ExactReal>,
    pub rounds: usize,
    pub accepted: usize,
    pub certified_moves: usize,
    pub certificate_slack: Option<ExactReal>,
    pub bound_factor: ExactReal,
    pub within_bound: bool,
}

/// Boundary of one (k+2)-simplex, possibly negated.
struct Move {
    faces: Vec<(usize, i64)>,
}

struct Search<'a> {
    weights: &'a [Q],
    p: i64,
    epsilon: &'a Q,
    current: Vec<i64>,
    incumbent: Vec<i64>,
}

impl Search<'_> {
    fn cost(&self, i: usize, c: i64) -> Q {
        let own = reduce_coeff(c, self.p).abs();
        let pen = reduce_coeff(c - self.incumbent[i], self.p).abs();
        &self.weights[i] * (q_int(own) + self.epsilon * q_int(pen))
    }

    fn delta(&self, m: &Move) -> Q {
        m.faces
            .iter()
            .map(|&(i, s)| self.cost(i, self.current[i] + s) - self.cost(i, self.current[i]))
            .sum()
    }

    fn apply(&mut self, m: &Move) {
        for &(i, s) in &m.faces {
            self.current[i] = reduce_coeff(self.current[i] + s, self.p);
        }
    }

    fn objective(&self) -> Q {
        (0..self.current.len()).map(|i| self.cost(i, self.current[i])).sum()
    }
}

fn moves(l: &Chain, p: i64) -> Vec<Move> {
    let complex = l.complex();
    let d = l.dim() + 2;
    let mut out = Vec::new();
    for tau in 0..complex.count(d) {
        let faces: Vec<(usize, i64)> =
            complex.faces(d, tau).iter().enumerate().map(|(j, &f)| (f, if j % 2 == 0 { 1 } else { -1 })).collect();
        if p > 2 {
            out.push(Move { faces: faces.iter().map(|&(f, s)| (f, -s)).collect() });
        }
        out.push(Move { faces });
    }
    out
}

/// Penalized local search over fillings of `L`, starting from `seed`.
///
/// Each round freezes the incumbent `S` and descends on
/// `mass_p(T) + ε mass_p(T − S)` by adding boundaries of single simplices
/// one dimension above the filling, accepting strict decreases only. The
/// round's result becomes the next incumbent; the search stops when a round
/// leaves the incumbent unchanged, so no single move improves the penalized
/// objective at the output.
pub fn quasi_minimize(l: &Chain, seed: &Chain, p: i64, params: &EkelandParams) -> Result<QuasiMinimizer> {
    check_modulus(p)?;
    let eps = &params.epsilon;
    if !eps.is_positive() || *eps > q_frac(1, 2) {
        return Err(Error::Precondition(format!("epsilon must lie in (0, 1/2], got {eps}")));
    }
    if !Arc::ptr_eq(l.complex(), seed.complex()) {
        return Err(Error::Precondition("seed and cycle live on different complexes".into()));
    }
    if seed.dim() != l.dim() + 1 || !seed.boundary()?.congruent(l, p)? {
        return Err(Error::Precondition(format!("seed is not a filling of the cycle mod {p}")));
    }
    let l = l.reduce_mod_p(p)?;
    let seed = seed.reduce_mod_p(p)?;
    let complex = l.complex();
    let k1 = l.dim() + 1;
    let weights = complex.weights(k1)?;
    let mut dense = vec![0i64; complex.count(k1)];
    for (i, c) in seed.iter() {
        dense[i] = c;
    }
    let mut gens = moves(&l, p);
    if let Some(s) = params.order_seed {
        gens.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    }

    let mut search = Search { weights, p, epsilon: eps, current: dense.clone(), incumbent: dense };
    let seed_mass = mass_p(&seed, p)?;
    let mut trace = vec![seed_mass.clone()];
    let (mut rounds, mut accepted) = (0, 0);
    loop {
        rounds += 1;
        let mut value = search.objective();
        let mut improved = true;
        while improved {
            improved = false;
            for m in &gens {
                let d = search.delta(m);
                if d.is_negative() {
                    search.apply(m);
                    value += d;
                    trace.push(value.clone());
                    accepted += 1;
                    improved = true;
                }
            }
        }
        if search.current == search.incumbent {
            break;
        }
        search.incumbent = search.current.clone();
        trace.push(search.objective());
    }

    let s = Chain::from_indices(complex, k1, Some(p), search.current.iter().enumerate().map(|(i, &c)| (i, c)))?;
    if !s.boundary()?.congruent(&l, p)? {
        return Err(Error::Certificate("quasi-minimizer lost the boundary condition".into()));
    }
    let certificate_slack = gens.iter().map(|m| search.delta(m)).min();
    if certificate_slack.as_ref().is_some_and(|d| d.is_negative()) {
        return Err(Error::Certificate("an improving move remains at the quasi-minimizer".into()));
    }
    if trace.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Certificate("objective trace is not strictly decreasing".into()));
    }
    let mass = mass_p(&s, p)?;
    Ok(QuasiMinimizer {
        s,
        l,
        p,
        epsilon: eps.clone(),
        seed_mass,
        mass,
        trace,
        rounds,
        accepted,
        certified_moves: gens.len(),
        certificate_slack,
    })
}

#[derive(Debug, Clone)]
pub struct DensityRow {
    pub vertex: usize,
    /// Distance from the vertex to `supp L`; `None` when `L = 0`.
    pub tau: Option<Q>,
    pub radii: Vec<Q>,
    pub masses: Vec<Q>,
    /// Smallest `δ` for which `ρ^(k+1) (3δ)^(-k) / (k+1)^(k+1)` stays below
    /// every measured mass; `None` for `k = 0` or when all radii are zero.
    pub delta: Option<f64>,
    pub nondecreasing: bool,
    /// Whether `ρ ↦ mass^(1/(k+1)) − c ρ` is nondecreasing for the fitted model constant `c`.
    pub excess_nondecreasing: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRowReport {
    pub vertex: usize,
    pub tau: Option<ExactReal>,
    pub radii: Vec<ExactReal>,
    pub masses: Vec<ExactReal>,
    pub model: Vec<f64>,
    pub delta: Option<f64>,
    pub nondecreasing: bool,
    pub excess_nondecreasing: Option<bool>,
}

impl DensityRow {
    fn model_constant(&self, k: usize) -> Option<f64> {
        let delta = self.delta?;
        let kk = k as f64;
        Some((3.0 * delta).powf(-kk) / (kk + 1.0).powf(kk + 1.0))
    }

    pub fn report(&self, k: usize) -> DensityRowReport {
        let c = self.model_constant(k);
        DensityRowReport {
            vertex: self.vertex,
            tau: self.tau.as_ref().map(ExactReal::from),
            radii: self.radii.iter().map(ExactReal::from).collect(),
            masses: self.masses.iter().map(ExactReal::from).collect(),
            model: self.radii.iter().map(|r| c.map_or(0.0, |c| c * q_to_f64(r).powi(k as i32 + 1))).collect(),
            delta: self.delta,
            nondecreasing: self.nondecreasing,
            excess_nondecreasing: self.excess_nondecreasing,
        }
    }
}

/// Mass of `S` on closed balls around test vertices.
///
/// A simplex of `S` counts toward `B_ρ(x)` when one of its vertices lies
/// within distance `ρ` of `x`. Test vertices must lie in `supp S` and off
/// `supp L`, and radii must stay below the distance to `supp L`.
pub fn density_profile(
    q: &QuasiMinimizer,
    metric: &FiniteMetricSpace,
    vertices: &[usize],
    radii: &[Q],
) -> Result<Vec<DensityRow>> {
    let s_verts = q.s.support_vertices();
    let l_verts = q.l.support_vertices();
    let k = q.l.dim();
    let complex = q.s.complex();
    let weights = complex.weights(k + 1)?;
    let mut radii = radii.to_vec();
    radii.sort();
    if radii.first().is_some_and(|r| r.is_negative()) {
        return Err(Error::Precondition("radii must be nonnegative".into()));
    }
    let mut rows = Vec::with_capacity(vertices.len());
    for &x in vertices {
        if s_verts.binary_search(&x).is_err() {
            return Err(Error::Precondition(format!("vertex {x} is not in the support of the filling")));
        }
        if l_verts.binary_search(&x).is_ok() {
            return Err(Error::Precondition(format!("vertex {x} lies on the cycle")));
        }
        let tau = metric.dist_to_set(x, &l_verts);
        if let (Some(t), Some(r)) = (&tau, radii.last()) {
            if r >= t {
                return Err(Error::Precondition(format!("radius {r} reaches the cycle from vertex {x}")));
            }
        }
        let masses: Vec<Q> = radii
            .iter()
            .map(|r| {
                q.s.iter()
                    .filter(|&(i, _)| complex.simplex(k + 1, i).vertices().iter().any(|&v| metric.dist(x, v) <= r))
                    .map(|(i, c)| &weights[i] * q_int(c.abs()))
                    .sum()
            })
            .collect();
        let nondecreasing = masses.windows(2).all(|w| w[0] <= w[1]);
        let kk = k as f64;
        let delta = (k > 0)
            .then(|| {
                radii
                    .iter()
                    .zip(&masses)
                    .filter(|(r, m)| r.is_positive() && m.is_positive())
                    .map(|(r, m)| {
                        let base = q_to_f64(r).powf(kk + 1.0) / ((kk + 1.0).powf(kk + 1.0) * q_to_f64(m));
                        base.powf(1.0 / kk) / 3.0
                    })
                    .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |a| a.max(d))))
            })
            .flatten();
        let mut row = DensityRow { vertex: x, tau, radii: radii.clone(), masses, delta, nondecreasing, excess_nondecreasing: None };
        row.excess_nondecreasing = row.model_constant(k).map(|c| {
            let slope = c.powf(1.0 / (kk + 1.0));
            let g: Vec<f64> = row
                .radii
                .iter()
                .zip(&row.masses)
                .map(|(r, m)| q_to_f64(m).powf(1.0 / (kk + 1.0)) - slope * q_to_f64(r))
                .collect();
            g.windows(2).all(|w| w[1] >= w[0] - 1e-12)
        });
        rows.push(row);
    }
    Ok(rows)
}
