use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use crate::complex::{Chain, ChainJson, WeightedComplex};
use crate::error::{Error, Result};
use crate::flatnorm::mass_p;
use crate::metric::FiniteMetricSpace;
use crate::number::{q_pow, q_to_f64, ExactReal, Q};

/// Metric attached to the complex, or the shortest-path metric of its edge lengths.
pub fn ambient_metric(complex: &WeightedComplex) -> Result<Arc<FiniteMetricSpace>> {
    if let Some(m) = complex.metric() {
        return Ok(m.clone());
    }
    let w = complex.weights(1)?;
    let edges: Vec<(usize, usize, Q)> = complex
        .simplices(1)
        .iter()
        .zip(w)
        .map(|(e, w)| (e.vertices()[0], e.vertices()[1], w.clone()))
        .collect();
    Ok(Arc::new(FiniteMetricSpace::shortest_paths(complex.vertex_count(), &edges)?))
}

/// Largest distance from a vertex of `supp S` to the nearest vertex of `supp L`.
///
/// Zero when either support is empty.
pub fn support_distance(metric: &FiniteMetricSpace, s: &Chain, l: &Chain) -> Q {
    let targets = l.support_vertices();
    if targets.is_empty() {
        return Q::zero();
    }
    s.support_vertices()
        .iter()
        .filter_map(|&v| metric.dist_to_set(v, &targets))
        .max()
        .unwrap_or_else(Q::zero)
}

/// A chain `T` with `∂T ≡ L mod p`, checked on construction.
#[derive(Debug, Clone)]
pub struct FillingCertificate {
    pub l: Chain,
    pub t: Chain,
    pub p: i64,
    pub mass: Q,
    pub cycle_mass: Q,
    /// `mass_p(T)^k / mass_p(L)^(k+1)`, the exact power of the isoperimetric ratio.
    pub ratio_pow: Q,
    /// `mass_p(T) / mass_p(L)^((k+1)/k)`.
    pub mass_ratio: f64,
    /// Largest distance from `supp T` to `supp L`.
    pub radius: Q,
    /// Whether the mass is known to be minimal.
    pub optimal: bool,
}

impl FillingCertificate {
    pub fn new(l: &Chain, t: &Chain, p: i64, metric: &FiniteMetricSpace, optimal: bool) -> Result<Self> {
        if t.dim() != l.dim() + 1 {
            return Err(Error::Certificate(format!("filling has dimension {} for a {}-cycle", t.dim(), l.dim())));
        }
        let t = t.reduce_mod_p(p)?;
        if !t.boundary()?.congruent(l, p)? {
            return Err(Error::Certificate(format!("boundary of the filling differs from the cycle mod {p}")));
        }
        let mass = mass_p(&t, p)?;
        let cycle_mass = mass_p(l, p)?;
        let k = l.dim() as u32;
        let (ratio_pow, mass_ratio) = if cycle_mass.is_zero() || k == 0 {
            (Q::zero(), 0.0)
        } else {
            let rp = q_pow(&mass, k) / q_pow(&cycle_mass, k + 1);
            let r = q_to_f64(&mass) / q_to_f64(&cycle_mass).powf((k + 1) as f64 / k as f64);
            (rp, r)
        };
        let radius = support_distance(metric, &t, l);
        Ok(FillingCertificate { l: l.clone(), t, p, mass, cycle_mass, ratio_pow, mass_ratio, radius, optimal })
    }

    pub fn report(&self) -> CertificateReport {
        CertificateReport {
            cycle: self.l.to_json(),
            filling: self.t.to_json(),
            p: self.p,
            mass: ExactReal::from(&self.mass),
            cycle_mass: ExactReal::from(&self.cycle_mass),
            ratio_pow: ExactReal::from(&self.ratio_pow),
            mass_ratio: self.mass_ratio,
            radius: ExactReal::from(&self.radius),
            optimal: self.optimal,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub cycle: ChainJson,
    pub filling: ChainJson,
    pub p: i64,
    pub mass: ExactReal,
    pub cycle_mass: ExactReal,
    pub ratio_pow: ExactReal,
    pub mass_ratio: f64,
    pub radius: ExactReal,
    pub optimal: bool,
}
