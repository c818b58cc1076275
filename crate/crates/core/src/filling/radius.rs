use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::certificate::{ambient_metric, FillingCertificate};
use crate::complex::{Chain, WeightedComplex};
use crate::error::{Error, Result};
use crate::gf2::{BitVec, EchelonBasis};
use crate::metric::FiniteMetricSpace;
use crate::number::{q_int, ExactReal, Q};

/// Radius at which a simplex enters the neighborhood filtration of `supp L`:
/// the larger of its farthest vertex distance to `supp L` and half its diameter.
pub fn simplex_radius(metric: &FiniteMetricSpace, vertices: &[usize], to_support: &[Q]) -> Q {
    let mut far = vertices.iter().map(|&v| to_support[v].clone()).max().unwrap_or_else(Q::zero);
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[..i] {
            let half = metric.dist(a, b) / q_int(2);
            if half > far {
                far = half;
            }
        }
    }
    far
}

#[derive(Debug, Clone, Serialize)]
pub struct RadiusStep {
    pub radius: ExactReal,
    pub columns: usize,
    pub rank: usize,
    pub solvable: bool,
}

#[derive(Debug, Clone)]
pub struct FillingRadius {
    pub radius: Q,
    pub certificate: FillingCertificate,
    pub profile: Vec<RadiusStep>,
}

/// Exact mod-2 filling radius of a cycle inside an ambient complex.
///
/// Simplices one dimension up are added in order of [`simplex_radius`]; the
/// answer is the first radius at which `L` lies in the GF(2) span of their
/// boundaries. A witness filling is recovered from the same columns.
pub fn filling_radius(l: &Chain, ambient: &Arc<WeightedComplex>) -> Result<FillingRadius> {
    if !Arc::ptr_eq(l.complex(), ambient) {
        return Err(Error::Precondition("cycle does not live on the ambient complex".into()));
    }
    let metric = ambient_metric(ambient)?;
    let l = l.reduce_mod_p(2)?;
    let k = l.dim();
    if k > 0 && !l.boundary()?.is_zero() {
        return Err(Error::NotACycle(2));
    }
    let zero_fill = Chain::zero(ambient, k + 1, Some(2));
    if l.is_zero() {
        let certificate = FillingCertificate::new(&l, &zero_fill, 2, &metric, true)?;
        return Ok(FillingRadius { radius: Q::zero(), certificate, profile: Vec::new() });
    }
    let support = l.support_vertices();
    let to_support: Vec<Q> =
        (0..ambient.vertex_count()).map(|v| metric.dist_to_set(v, &support).expect("nonempty support")).collect();
    let mut cols: Vec<(Q, usize)> = ambient
        .simplices(k + 1)
        .iter()
        .enumerate()
        .map(|(i, s)| (simplex_radius(&metric, s.vertices(), &to_support), i))
        .collect();
    cols.sort();

    let rows = ambient.count(k);
    let target = BitVec::from_ones(rows, l.support());
    let column = |i: usize| BitVec::from_ones(rows, ambient.faces(k + 1, i).iter().copied());
    let mut basis = EchelonBasis::new(rows, false);
    let mut profile = Vec::new();
    let mut found: Option<(Q, usize)> = None;
    let mut pos = 0;
    while pos < cols.len() {
        let rho = cols[pos].0.clone();
        while pos < cols.len() && cols[pos].0 == rho {
            basis.insert(&column(cols[pos].1));
            pos += 1;
        }
        let solvable = basis.contains(&target);
        profile.push(RadiusStep { radius: ExactReal::from(&rho), columns: pos, rank: basis.rank(), solvable });
        if solvable {
            found = Some((rho, pos));
            break;
        }
    }
    let (radius, used) = found.ok_or(Error::NotNullHomologous(2))?;

    let mut tracked = EchelonBasis::new(rows, true);
    for &(_, i) in &cols[..used] {
        tracked.insert(&column(i));
    }
    let combo = tracked.solve(&target).ok_or_else(|| Error::Solver("witness solve failed".into()))?;
    let t = Chain::from_indices(ambient, k + 1, Some(2), combo.ones().map(|j| (cols[j].1, 1)))?;
    let certificate = FillingCertificate::new(&l, &t, 2, &metric, false)?;
    Ok(FillingRadius { radius, certificate, profile })
}
