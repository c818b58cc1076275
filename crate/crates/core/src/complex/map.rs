use std::sync::Arc;

use super::{Chain, Simplex, WeightedComplex};
use crate::error::{Error, Result};
use crate::number::Q;

/// Vertex map between complexes that sends simplices to (possibly degenerate) simplices.
#[derive(Debug, Clone)]
pub struct SimplicialMap {
    source: Arc<WeightedComplex>,
    target: Arc<WeightedComplex>,
    vertex_map: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(source: &Arc<WeightedComplex>, target: &Arc<WeightedComplex>, vertex_map: Vec<usize>) -> Result<Self> {
        if vertex_map.len() != source.vertex_count() {
            return Err(Error::NotSimplicial(format!(
                "vertex map has {} entries for {} vertices",
                vertex_map.len(),
                source.vertex_count()
            )));
        }
        if let Some(&v) = vertex_map.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::NotSimplicial(format!("image vertex {v} out of range")));
        }
        let map = SimplicialMap { source: source.clone(), target: target.clone(), vertex_map };
        for d in 1..=source.top_dim() {
            for s in source.simplices(d) {
                if map.image_span(s).is_none() {
                    return Err(Error::NotSimplicial(format!("image of {s:?} spans no simplex of the target")));
                }
            }
        }
        Ok(map)
    }

    pub fn identity(complex: &Arc<WeightedComplex>) -> Self {
        SimplicialMap { source: complex.clone(), target: complex.clone(), vertex_map: (0..complex.vertex_count()).collect() }
    }

    pub fn source(&self) -> &Arc<WeightedComplex> {
        &self.source
    }

    pub fn target(&self) -> &Arc<WeightedComplex> {
        &self.target
    }

    pub fn apply(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    /// Target simplex spanned by the image vertex set (duplicates collapsed).
    fn image_span(&self, s: &Simplex) -> Option<usize> {
        let mut img: Vec<usize> = s.vertices().iter().map(|&v| self.vertex_map[v]).collect();
        img.sort_unstable();
        img.dedup();
        self.target.index_of(&Simplex::from_sorted(img)?)
    }

    /// Oriented image of a simplex, `None` when it degenerates.
    fn image(&self, s: &Simplex) -> Option<(usize, i64)> {
        let img: Vec<usize> = s.vertices().iter().map(|&v| self.vertex_map[v]).collect();
        let (t, sign) = Simplex::oriented(&img)?;
        Some((self.target.index_of(&t)?, sign))
    }

    /// Ratio `weight(f(σ)) / weight(σ)`, or `None` for degenerate images.
    pub fn expansion(&self, dim: usize, idx: usize) -> Result<Option<Q>> {
        let s = self.source.simplex(dim, idx);
        match self.image(s) {
            None => Ok(None),
            Some((t, _)) => Ok(Some(self.target.weight(dim, t)? / self.source.weight(dim, idx)?)),
        }
    }

    /// Largest expansion over the nondegenerate simplices of one dimension.
    pub fn max_expansion(&self, dim: usize) -> Result<Q> {
        let mut best = Q::default();
        for i in 0..self.source.count(dim) {
            if let Some(e) = self.expansion(dim, i)? {
                if e > best {
                    best = e;
                }
            }
        }
        Ok(best)
    }

    pub fn pushforward(&self, chain: &Chain) -> Result<Chain> {
        if !Arc::ptr_eq(chain.complex(), &self.source) {
            return Err(Error::InvalidChain("chain does not live on the map's source".into()));
        }
        let k = chain.dim();
        let terms = chain.iter().filter_map(|(i, c)| {
            let (t, sign) = self.image(self.source.simplex(k, i))?;
            Some((t, sign * c))
        });
        Chain::from_indices(&self.target, k, chain.modulus(), terms.collect::<Vec<_>>())
    }
}
