use num_traits::Zero;

use crate::complex::{Chain, Simplex};
use crate::error::{Error, Result};
use crate::flatnorm::mass;
use crate::metric::FiniteMetricSpace;
use crate::number::{q_int, Q};

/// Constant in the cone bound `mass(a * L) <= c·R·mass(L)`.
pub const CONE_CONSTANT: i64 = 2;

#[derive(Debug, Clone)]
pub struct ConeFill {
    pub apex: usize,
    pub t: Chain,
    pub mass: Q,
    /// Largest distance from the apex to a vertex of `supp L`.
    pub reach: Q,
    /// `CONE_CONSTANT · reach · mass(L)`.
    pub bound: Q,
}

/// Joins every simplex of `L` to `apex`: `T = Σ c_σ [apex, σ]`.
///
/// Simplices containing the apex cone to degenerate simplices and drop out,
/// which keeps `∂T = L − apex * ∂L` exact. The cycle condition is checked
/// mod the chain's modulus (or over ℤ).
pub fn cone_fill(l: &Chain, apex: usize, metric: &FiniteMetricSpace) -> Result<ConeFill> {
    let complex = l.complex();
    if apex >= complex.vertex_count() {
        return Err(Error::Precondition(format!("apex {apex} out of range")));
    }
    if l.dim() > 0 && !l.boundary()?.is_zero() {
        return Err(Error::NotACycle(l.modulus().unwrap_or(0)));
    }
    let k = l.dim();
    let mut terms = Vec::with_capacity(l.len());
    for (i, c) in l.iter() {
        let s = complex.simplex(k, i);
        if s.contains(apex) {
            continue;
        }
        let mut verts = Vec::with_capacity(k + 2);
        verts.push(apex);
        verts.extend_from_slice(s.vertices());
        let (cone, sign) = Simplex::oriented(&verts).expect("apex not in simplex");
        let j = complex.index_of(&cone).ok_or_else(|| Error::MissingConeSimplex(verts.clone()))?;
        terms.push((j, sign * c));
    }
    let t = Chain::from_indices(complex, k + 1, l.modulus(), terms)?;
    let expected = if k == 0 {
        // a 0-chain cones to a 1-chain with boundary L − (Σ c)·apex
        let total: i64 = l.iter().map(|(_, c)| c).sum();
        l.sub(&Chain::from_indices(complex, 0, l.modulus(), [(apex, total)])?)?
    } else {
        l.clone()
    };
    if t.boundary()? != expected {
        return Err(Error::Certificate("cone boundary differs from the cycle".into()));
    }
    let verts = l.support_vertices();
    let reach = verts.iter().map(|&v| metric.dist(apex, v).clone()).max().unwrap_or_else(Q::zero);
    let bound = q_int(CONE_CONSTANT) * &reach * mass(l)?;
    Ok(ConeFill { apex, mass: mass(&t)?, t, reach, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::WeightedComplex;
    use crate::filling::ambient_metric;
    use std::sync::Arc;

    #[test]
    fn apex_on_triangle_drops_degenerate_cones() {
        let k = Arc::new(WeightedComplex::builder(3).simplex(&[0, 1, 2]).build().unwrap());
        let m = ambient_metric(&k).unwrap();
        let l = Chain::simplex(&k, &[0, 1, 2]).unwrap().boundary().unwrap();
        let c = cone_fill(&l, 0, &m).unwrap();
        assert_eq!(c.t, Chain::simplex(&k, &[0, 1, 2]).unwrap());
    }

    #[test]
    fn missing_cone_simplex() {
        let k = Arc::new(WeightedComplex::builder(4).simplices([[0, 1], [1, 2], [0, 2], [2, 3]]).build().unwrap());
        let m = ambient_metric(&k).unwrap();
        let l = Chain::from_terms(&k, 1, None, &[([0, 1], 1), ([1, 2], 1), ([2, 0], 1)]).unwrap();
        assert!(matches!(cone_fill(&l, 3, &m), Err(Error::MissingConeSimplex(_))));
    }
}
