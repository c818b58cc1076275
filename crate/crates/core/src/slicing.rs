//! Sublevel restriction of chains and the slice operator.
//!
//! A simplex lies in `{u < r}` when every one of its vertices does, so
//! restrictions of closed chains stay closed under faces.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::complex::{Chain, WeightedComplex};
use crate::error::{Error, Result};
use crate::flatnorm::{mass, mass_p};
use crate::number::{ExactReal, Q};

/// Real-valued function on the vertices of a complex.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    values: Vec<Q>,
}

impl VertexFunction {
    pub fn new(values: Vec<Q>) -> Self {
        VertexFunction { values }
    }

    /// Distance to `center` in the complex's metric.
    pub fn distance_from(complex: &WeightedComplex, center: usize) -> Result<Self> {
        let m = complex.metric().ok_or_else(|| Error::Precondition("complex has no metric".into()))?;
        Ok(VertexFunction { values: m.row(center).to_vec() })
    }

    pub fn value(&self, v: usize) -> &Q {
        &self.values[v]
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `max |u(a) − u(b)| / length(ab)` over the edges of the complex.
    pub fn lipschitz(&self, complex: &WeightedComplex) -> Result<Q> {
        let w = complex.weights(1)?;
        let mut best = Q::zero();
        for (i, e) in complex.simplices(1).iter().enumerate() {
            let [a, b] = e.vertices() else { unreachable!() };
            let ratio = (&self.values[*a] - &self.values[*b]).abs() / &w[i];
            if ratio > best {
                best = ratio;
            }
        }
        Ok(best)
    }

    fn max_on(&self, complex: &WeightedComplex, dim: usize, idx: usize) -> &Q {
        complex.simplex(dim, idx).vertices().iter().map(|&v| &self.values[v]).max().expect("nonempty simplex")
    }

    fn check(&self, chain: &Chain) -> Result<()> {
        if self.values.len() != chain.complex().vertex_count() {
            return Err(Error::Precondition(format!(
                "function has {} values for {} vertices",
                self.values.len(),
                chain.complex().vertex_count()
            )));
        }
        Ok(())
    }
}

/// `T⌞{u < r}`: the simplices whose vertices all satisfy `u < r`.
pub fn restrict(t: &Chain, u: &VertexFunction, r: &Q) -> Result<Chain> {
    u.check(t)?;
    let complex = t.complex().clone();
    Ok(t.filter(|i| u.max_on(&complex, t.dim(), i) < r))
}

/// `⟨T, u, r⟩ = ∂(T⌞{u < r}) − (∂T)⌞{u < r}`.
pub fn slice(t: &Chain, u: &VertexFunction, r: &Q) -> Result<Chain> {
    if t.dim() == 0 {
        return Err(Error::ZeroDimensionalBoundary);
    }
    restrict(t, u, r)?.boundary()?.sub(&restrict(&t.boundary()?, u, r)?)
}

/// Whether `r` equals the value of `u` at some vertex.
pub fn is_critical(u: &VertexFunction, r: &Q) -> bool {
    u.values.iter().any(|v| v == r)
}

/// One constant piece of the slice as `r` sweeps `(low, high]`.
#[derive(Debug, Clone)]
pub struct SlicePiece {
    pub low: Q,
    pub high: Q,
    pub slice: Chain,
    pub mass: Q,
}

#[derive(Debug, Clone)]
pub struct SliceSpectrum {
    pub pieces: Vec<SlicePiece>,
    /// `Σ (high − low) · mass(slice)`.
    pub integral: Q,
    /// `Lip(u) · mass(T)`.
    pub bound: Q,
}

impl SliceSpectrum {
    /// `integral / bound`, or `None` when the bound is zero.
    pub fn ratio(&self) -> Option<Q> {
        (!self.bound.is_zero()).then(|| &self.integral / &self.bound)
    }

    pub fn report(&self) -> SpectrumReport {
        SpectrumReport {
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceReport {
                    low: ExactReal::from(&p.low),
                    high: ExactReal::from(&p.high),
                    slice: p.slice.to_json(),
                    mass: ExactReal::from(&p.mass),
                })
                .collect(),
            integral: ExactReal::from(&self.integral),
            bound: ExactReal::from(&self.bound),
            ratio: self.ratio().map(ExactReal::from),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PieceReport {
    pub low: ExactReal,
    pub high: ExactReal,
    pub slice: crate::complex::ChainJson,
    pub mass: ExactReal,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub pieces: Vec<PieceReport>,
    pub integral: ExactReal,
    pub bound: ExactReal,
    pub ratio: Option<ExactReal>,
}

/// Every distinct slice between consecutive critical values of `u` on the
/// support of `T`, with the coarea diagnostic. Masses are taken mod `p` when given.
pub fn slice_spectrum(t: &Chain, u: &VertexFunction, p: Option<i64>) -> Result<SliceSpectrum> {
    if t.dim() == 0 {
        return Err(Error::ZeroDimensionalBoundary);
    }
    u.check(t)?;
    let measure = |c: &Chain| match p {
        Some(p) => mass_p(c, p),
        None => mass(c),
    };
    let mut crit: Vec<Q> = t.support_vertices().iter().map(|&v| u.values[v].clone()).collect();
    crit.sort();
    crit.dedup();
    let mut pieces = Vec::new();
    let mut integral = Q::zero();
    for w in crit.windows(2) {
        // constant on (w0, w1] because membership uses the strict inequality
        let s = slice(t, u, &w[1])?;
        let m = measure(&s)?;
        integral += (&w[1] - &w[0]) * &m;
        pieces.push(SlicePiece { low: w[0].clone(), high: w[1].clone(), slice: s, mass: m });
    }
    let bound = u.lipschitz(t.complex())? * measure(t)?;
    Ok(SliceSpectrum { pieces, integral, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{q_frac, q_int};
    use std::sync::Arc;

    fn path() -> (Arc<WeightedComplex>, Chain, VertexFunction) {
        let k = Arc::new(
            WeightedComplex::builder(4)
                .coords((0..4).map(|i| vec![i as f64]).collect())
                .simplices([[0, 1], [1, 2], [2, 3]])
                .build()
                .unwrap(),
        );
        let t = Chain::from_terms(&k, 1, None, &[([0, 1], 1), ([1, 2], 1), ([2, 3], 1)]).unwrap();
        let u = VertexFunction::new((0..4).map(|i| q_int(i)).collect());
        (k, t, u)
    }

    #[test]
    fn restriction_extremes() {
        let (_, t, u) = path();
        assert_eq!(restrict(&t, &u, &q_int(4)).unwrap(), t);
        assert!(restrict(&t, &u, &q_int(0)).unwrap().is_zero());
        assert_eq!(restrict(&t, &u, &q_frac(3, 2)).unwrap().len(), 1);
    }

    #[test]
    fn slice_is_cut_vertex() {
        let (k, t, u) = path();
        let s = slice(&t, &u, &q_frac(3, 2)).unwrap();
        assert_eq!(s, Chain::simplex(&k, &[1]).unwrap());
        assert!(slice(&t, &u, &q_int(10)).unwrap().is_zero());
    }

    #[test]
    fn unit_path_coarea_ratio_one() {
        let (_, t, u) = path();
        let sp = slice_spectrum(&t, &u, None).unwrap();
        assert_eq!(sp.pieces.len(), 3);
        assert_eq!(sp.ratio(), Some(q_int(1)));
        let flat = VertexFunction::new(vec![q_int(2); 4]);
        assert!(slice_spectrum(&t, &flat, None).unwrap().pieces.is_empty());
    }
}
