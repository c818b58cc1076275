use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flatnorm::MassMeasure;
use crate::metric::FiniteMetricSpace;
use crate::number::{q_frac, q_int, ExactReal, Q};

/// Default density factor for the covering.
pub fn default_density() -> Q {
    q_frac(1, 2)
}

/// Farthest vertex of a simplex from `center`.
pub(crate) fn reach(metric: &FiniteMetricSpace, center: usize, vertices: &[usize]) -> Q {
    vertices.iter().map(|&v| metric.dist(center, v).clone()).max().unwrap_or_else(Q::zero)
}

/// Disjoint balls `B_{r_i}(y_i)` carrying a fixed fraction of a measure.
///
/// A simplex lies in `B_r(y)` when all of its vertices are at distance `< r` from `y`.
#[derive(Debug, Clone)]
pub struct BallCover {
    pub centers: Vec<usize>,
    pub radii: Vec<Q>,
    /// `μ(B_{r_i}(y_i))` for each ball.
    pub masses: Vec<Q>,
    pub density: Q,
    pub total: Q,
}

#[derive(Debug, Clone, Serialize)]
pub struct BallReport {
    pub center: usize,
    pub radius: ExactReal,
    pub mass: ExactReal,
}

impl BallCover {
    pub fn report(&self) -> Vec<BallReport> {
        (0..self.centers.len())
            .map(|i| BallReport {
                center: self.centers[i],
                radius: ExactReal::from(&self.radii[i]),
                mass: ExactReal::from(&self.masses[i]),
            })
            .collect()
    }

    /// Rechecks the three covering properties against the measure.
    ///
    /// (a) `μ(B_{r_i}) >= F·r_i` and `μ(B_s) < F·s` for every `s > r_i`;
    /// (b) `d(y_i, y_j) >= 2r_i + 2r_j`, so the doubled balls are disjoint;
    /// (c) `5·Σ μ(B_{r_i}) >= μ(total)`.
    pub fn verify(&self, mu: &MassMeasure, metric: &FiniteMetricSpace) -> Result<()> {
        let f = &self.density;
        for (i, &y) in self.centers.iter().enumerate() {
            let profile = ball_profile(mu, metric, y);
            let r = &self.radii[i];
            let at_r = mass_below(&profile, r);
            if at_r != self.masses[i] || at_r < f * r {
                return Err(Error::Certificate(format!("ball {i} at {y} violates the lower density bound")));
            }
            // μ(B_s) equals m_j on (d_j, d_{j+1}], so a larger admissible s exists
            // exactly when min(d_{j+1}, m_j / F) exceeds both d_j and r
            for (j, (d, m)) in profile.iter().enumerate() {
                let cap = m / f;
                let top = match profile.get(j + 1) {
                    Some((next, _)) if *next < cap => next.clone(),
                    _ => cap,
                };
                if top > *d && &top > r {
                    return Err(Error::Certificate(format!("ball {i} at {y} is not maximal")));
                }
            }
        }
        for i in 0..self.centers.len() {
            for j in 0..i {
                let need = q_int(2) * (&self.radii[i] + &self.radii[j]);
                if metric.dist(self.centers[i], self.centers[j]) < &need {
                    return Err(Error::Certificate(format!("doubled balls {j} and {i} intersect")));
                }
            }
        }
        let covered: Q = self.masses.iter().sum();
        if q_int(5) * covered < self.total {
            return Err(Error::Certificate("balls carry less than a fifth of the measure".into()));
        }
        Ok(())
    }
}

/// Sorted `(d_j, m_j)`: `m_j` is the measure of atoms whose reach from `y` is `<= d_j`.
fn ball_profile(mu: &MassMeasure, metric: &FiniteMetricSpace, y: usize) -> Vec<(Q, Q)> {
    let complex = mu.complex();
    let mut reaches: Vec<(Q, Q)> =
        mu.atoms().map(|(i, m)| (reach(metric, y, complex.simplex(mu.dim(), i).vertices()), m.clone())).collect();
    reaches.sort();
    let mut out: Vec<(Q, Q)> = Vec::new();
    let mut acc = Q::zero();
    for (d, m) in reaches {
        acc += m;
        match out.last_mut() {
            Some(last) if last.0 == d => last.1 = acc.clone(),
            _ => out.push((d, acc.clone())),
        }
    }
    out
}

/// `μ(B_s(y))` from a profile: atoms with reach strictly below `s`.
fn mass_below(profile: &[(Q, Q)], s: &Q) -> Q {
    profile.iter().take_while(|(d, _)| d < s).last().map(|(_, m)| m.clone()).unwrap_or_else(Q::zero)
}

/// Largest `r` with `μ(B_r(y)) >= F·r`, or `None` if there is none.
fn admissible_radius(profile: &[(Q, Q)], f: &Q) -> Option<Q> {
    let mut best: Option<Q> = None;
    for (j, (d, m)) in profile.iter().enumerate() {
        let cap = m / f;
        if cap <= *d {
            continue;
        }
        let r = match profile.get(j + 1) {
            Some((next, _)) if *next < cap => next.clone(),
            _ => cap,
        };
        if best.as_ref().is_none_or(|b| r > *b) {
            best = Some(r);
        }
    }
    best
}

/// Greedy covering by balls of maximal admissible radius.
///
/// Candidate centers are the vertices of the measure's support. Centers are
/// taken in order of decreasing radius (then index) and kept when their
/// doubled ball stays clear of every kept one. The result is verified before
/// it is returned.
pub fn cover_balls(mu: &MassMeasure, metric: &FiniteMetricSpace, density: &Q) -> Result<BallCover> {
    if mu.is_zero() {
        return Err(Error::Precondition("cannot cover the zero measure".into()));
    }
    if !density.is_positive() {
        return Err(Error::Precondition("density factor must be positive".into()));
    }
    let complex = mu.complex();
    let mut verts: Vec<usize> =
        mu.atoms().flat_map(|(i, _)| complex.simplex(mu.dim(), i).vertices().to_vec()).collect();
    verts.sort_unstable();
    verts.dedup();
    let mut cands = Vec::with_capacity(verts.len());
    for &y in &verts {
        let profile = ball_profile(mu, metric, y);
        let r = admissible_radius(&profile, density).ok_or(Error::NoAdmissibleRadius { vertex: y })?;
        let m = mass_below(&profile, &r);
        cands.push((r, y, m));
    }
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut cover =
        BallCover { centers: Vec::new(), radii: Vec::new(), masses: Vec::new(), density: density.clone(), total: mu.total() };
    for (r, y, m) in cands {
        let clear = cover
            .centers
            .iter()
            .zip(&cover.radii)
            .all(|(&c, rc)| metric.dist(y, c) >= &(q_int(2) * (&r + rc)));
        if clear {
            cover.centers.push(y);
            cover.radii.push(r);
            cover.masses.push(m);
        }
    }
    cover.verify(mu, metric)?;
    Ok(cover)
}
