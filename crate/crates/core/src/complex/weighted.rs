use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed};

use super::volume::{cayley_menger_volume, diameter_weight};
use super::Simplex;
use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;
use crate::number::{q_from_f64, q_sqrt, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LengthKind {
    /// Squared lengths from vertex coordinates; degenerate simplices are errors.
    Coords,
    /// Squared lengths from a metric or explicit edge lengths; non-Euclidean
    /// simplices fall back to the diameter bound.
    Metric,
    /// Every simplex has weight one.
    Unit,
}

/// Finite simplicial complex with positive per-simplex weights.
///
/// Simplices of each dimension are stored sorted, so a simplex is addressed
/// by `(dim, index)`. Weights of dimension two and above are computed on first
/// use from the squared edge lengths.
pub struct WeightedComplex {
    vertex_count: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    faces: Vec<Vec<Vec<usize>>>,
    cofaces: Vec<Vec<Vec<usize>>>,
    edge_sq: Vec<Q>,
    kind: LengthKind,
    overrides: HashMap<Simplex, Q>,
    weights: Vec<OnceLock<Result<Vec<Q>, String>>>,
    coords: Option<Vec<Vec<f64>>>,
    metric: Option<Arc<FiniteMetricSpace>>,
}

impl fmt::Debug for WeightedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedComplex")
            .field("vertex_count", &self.vertex_count)
            .field("counts", &self.simplices.iter().map(Vec::len).collect::<Vec<_>>())
            .finish()
    }
}

/// Collects simplices and a length source, then closes them under faces.
pub struct ComplexBuilder {
    vertex_count: usize,
    generators: Vec<Vec<usize>>,
    closed: bool,
    coords: Option<Vec<Vec<f64>>>,
    metric: Option<Arc<FiniteMetricSpace>>,
    edge_lengths: Option<HashMap<(usize, usize), Q>>,
    overrides: HashMap<Simplex, Q>,
}

impl ComplexBuilder {
    pub fn new(vertex_count: usize) -> Self {
        ComplexBuilder {
            vertex_count,
            generators: Vec::new(),
            closed: false,
            coords: None,
            metric: None,
            edge_lengths: None,
            overrides: HashMap::new(),
        }
    }

    pub fn simplex(mut self, vertices: &[usize]) -> Self {
        self.generators.push(vertices.to_vec());
        self
    }

    pub fn simplices<I, S>(mut self, iter: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        self.generators.extend(iter.into_iter().map(|s| s.as_ref().to_vec()));
        self
    }

    /// Declares the generator list already closed under faces (skips closure).
    pub fn already_closed(mut self) -> Self {
        self.closed = true;
        self
    }

    pub fn coords(mut self, coords: Vec<Vec<f64>>) -> Self {
        self.coords = Some(coords);
        self
    }

    pub fn metric(mut self, metric: Arc<FiniteMetricSpace>) -> Self {
        self.metric = Some(metric);
        self
    }

    /// Explicit lengths for edges; every edge of the complex must be listed.
    pub fn edge_lengths(mut self, lengths: HashMap<(usize, usize), Q>) -> Self {
        self.edge_lengths = Some(lengths.into_iter().map(|((a, b), l)| ((a.min(b), a.max(b)), l)).collect());
        self
    }

    /// Fixes the weight of one simplex, overriding the length source.
    pub fn weight(mut self, vertices: &[usize], w: Q) -> Self {
        if let Some((s, _)) = Simplex::oriented(vertices) {
            self.overrides.insert(s, w);
        }
        self
    }

    pub fn build(self) -> Result<WeightedComplex> {
        let n = self.vertex_count;
        let mut per_dim: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new()];
        for v in 0..n {
            per_dim[0].insert(Simplex::vertex(v));
        }
        for g in &self.generators {
            let (s, _) = Simplex::oriented(g)
                .ok_or_else(|| Error::InvalidComplex(format!("degenerate or empty simplex {g:?}")))?;
            if let Some(&v) = s.vertices().iter().find(|&&v| v >= n) {
                return Err(Error::InvalidComplex(format!("vertex {v} out of range in {g:?}")));
            }
            let faces = if self.closed { vec![s] } else { s.all_faces() };
            for f in faces {
                let d = f.dim();
                while per_dim.len() <= d {
                    per_dim.push(BTreeSet::new());
                }
                per_dim[d].insert(f);
            }
        }
        let simplices: Vec<Vec<Simplex>> = per_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index: Vec<HashMap<Simplex, usize>> = simplices
            .iter()
            .map(|list| list.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect())
            .collect();

        let mut faces = vec![Vec::new(); simplices.len()];
        let mut cofaces: Vec<Vec<Vec<usize>>> = simplices.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        for d in 1..simplices.len() {
            let mut fd = Vec::with_capacity(simplices[d].len());
            for (i, s) in simplices[d].iter().enumerate() {
                let mut idx = Vec::with_capacity(d + 1);
                for (f, _) in s.boundary_faces() {
                    let j = *index[d - 1].get(&f).ok_or_else(|| {
                        Error::InvalidComplex(format!("face {f:?} of {s:?} missing (not closed under faces)"))
                    })?;
                    cofaces[d - 1][j].push(i);
                    idx.push(j);
                }
                fd.push(idx);
            }
            faces[d] = fd;
        }

        let edges: &[Simplex] = simplices.get(1).map(Vec::as_slice).unwrap_or(&[]);
        let (kind, edge_sq) = if let Some(coords) = &self.coords {
            if coords.len() != n {
                return Err(Error::InvalidComplex(format!("{} coordinates for {n} vertices", coords.len())));
            }
            let sq = edges
                .iter()
                .map(|e| {
                    let (a, b) = (&coords[e.vertices()[0]], &coords[e.vertices()[1]]);
                    q_from_f64(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
                })
                .collect();
            (LengthKind::Coords, sq)
        } else if let Some(lengths) = &self.edge_lengths {
            let mut sq = Vec::with_capacity(edges.len());
            for e in edges {
                let key = (e.vertices()[0], e.vertices()[1]);
                let l = lengths
                    .get(&key)
                    .ok_or_else(|| Error::InvalidComplex(format!("no length given for edge {e:?}")))?;
                sq.push(l * l);
            }
            (LengthKind::Metric, sq)
        } else if let Some(metric) = &self.metric {
            if metric.len() != n {
                return Err(Error::InvalidComplex(format!("metric has {} points for {n} vertices", metric.len())));
            }
            let sq = edges
                .iter()
                .map(|e| {
                    let d = metric.dist(e.vertices()[0], e.vertices()[1]);
                    d * d
                })
                .collect();
            (LengthKind::Metric, sq)
        } else {
            (LengthKind::Unit, vec![Q::one(); edges.len()])
        };

        for (s, w) in &self.overrides {
            if !w.is_positive() {
                return Err(Error::InvalidComplex(format!("nonpositive weight for {s:?}")));
            }
            if s.dim() == 0 && !w.is_one() {
                return Err(Error::InvalidComplex("vertex weights must be 1".into()));
            }
        }
        let weights = (0..simplices.len()).map(|_| OnceLock::new()).collect();
        let complex = WeightedComplex {
            vertex_count: n,
            simplices,
            index,
            faces,
            cofaces,
            edge_sq,
            kind,
            overrides: self.overrides,
            weights,
            coords: self.coords,
            metric: self.metric.clone(),
        };
        // edge weights are validated eagerly; higher dimensions on first use
        if complex.top_dim() >= 1 {
            complex.weights(1)?;
        }
        Ok(complex)
    }
}

impl WeightedComplex {
    pub fn builder(vertex_count: usize) -> ComplexBuilder {
        ComplexBuilder::new(vertex_count)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Highest dimension with at least one simplex.
    pub fn top_dim(&self) -> usize {
        self.simplices.iter().rposition(|l| !l.is_empty()).unwrap_or(0)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.get(dim).map_or(0, Vec::len)
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.simplices.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn simplex(&self, dim: usize, idx: usize) -> &Simplex {
        &self.simplices[dim][idx]
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    /// Indices of the codimension-one faces; face `j` carries sign `(-1)^j`.
    pub fn faces(&self, dim: usize, idx: usize) -> &[usize] {
        &self.faces[dim][idx]
    }

    pub fn cofaces(&self, dim: usize, idx: usize) -> &[usize] {
        &self.cofaces[dim][idx]
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.coords.as_deref()
    }

    pub fn metric(&self) -> Option<&Arc<FiniteMetricSpace>> {
        self.metric.as_ref()
    }

    /// Per-simplex weights of one dimension.
    pub fn weights(&self, dim: usize) -> Result<&[Q]> {
        if dim >= self.simplices.len() {
            return Ok(&[]);
        }
        let cell = self.weights[dim].get_or_init(|| self.compute_weights(dim).map_err(|e| e.to_string()));
        match cell {
            Ok(w) => Ok(w),
            Err(msg) => Err(Error::InvalidComplex(msg.clone())),
        }
    }

    pub fn weight(&self, dim: usize, idx: usize) -> Result<&Q> {
        Ok(&self.weights(dim)?[idx])
    }

    fn edge_sq_between(&self, a: usize, b: usize) -> &Q {
        let e = Simplex::from_sorted(vec![a.min(b), a.max(b)]).expect("distinct vertices");
        &self.edge_sq[self.index[1][&e]]
    }

    fn compute_weights(&self, dim: usize) -> Result<Vec<Q>> {
        let mut out = Vec::with_capacity(self.simplices[dim].len());
        for s in &self.simplices[dim] {
            if let Some(w) = self.overrides.get(s) {
                out.push(w.clone());
                continue;
            }
            if dim == 0 || self.kind == LengthKind::Unit {
                out.push(Q::one());
                continue;
            }
            let vs = s.vertices();
            let sq: Vec<Vec<Q>> = vs
                .iter()
                .map(|&a| vs.iter().map(|&b| if a == b { Q::default() } else { self.edge_sq_between(a, b).clone() }).collect())
                .collect();
            let w = if dim == 1 {
                let l = q_sqrt(&sq[0][1])?;
                l.is_positive().then_some(l)
            } else {
                cayley_menger_volume(&sq)?
            };
            match (w, self.kind) {
                (Some(w), _) => out.push(w),
                (None, LengthKind::Metric) => {
                    let w = diameter_weight(&sq)?;
                    if !w.is_positive() {
                        return Err(Error::InvalidComplex(format!("zero-diameter simplex {s:?}")));
                    }
                    out.push(w)
                }
                (None, _) => return Err(Error::InvalidComplex(format!("degenerate simplex {s:?}"))),
            }
        }
        Ok(out)
    }

    /// Squared length of the edge between two vertices of the complex.
    pub fn edge_length_sq(&self, a: usize, b: usize) -> Option<Q> {
        let e = Simplex::from_sorted(vec![a.min(b), a.max(b)])?;
        let i = *self.index.get(1)?.get(&e)?;
        Some(self.edge_sq[i].clone())
    }

    /// Distance between two vertices from the attached metric.
    pub fn distance(&self, a: usize, b: usize) -> Option<&Q> {
        self.metric.as_ref().map(|m| m.dist(a, b))
    }

    /// Returns `true` if `other` has the same vertex set and contains every simplex of `self`.
    pub fn is_subcomplex_of(&self, other: &WeightedComplex) -> bool {
        self.vertex_count <= other.vertex_count
            && self.simplices.iter().flatten().all(|s| other.contains(s))
    }

    /// Copy of this complex sharing its lengths but with a metric attached.
    pub fn with_metric(&self, metric: Arc<FiniteMetricSpace>) -> Result<WeightedComplex> {
        let mut b = ComplexBuilder::new(self.vertex_count)
            .simplices(self.simplices.iter().flatten().map(|s| s.vertices().to_vec()))
            .already_closed();
        b.overrides = self.overrides.clone();
        for d in 1..self.simplices.len() {
            let w = self.weights(d)?;
            for (s, w) in self.simplices[d].iter().zip(w) {
                b.overrides.insert(s.clone(), w.clone());
            }
        }
        b.coords = self.coords.clone();
        b.metric = Some(metric);
        b.build()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::{q_frac, q_int};

    #[test]
    fn closure_adds_faces() {
        let c = WeightedComplex::builder(4).simplex(&[0, 1, 2, 3]).build().unwrap();
        assert_eq!((c.count(0), c.count(1), c.count(2), c.count(3)), (4, 6, 4, 1));
        assert_eq!(c.top_dim(), 3);
    }

    #[test]
    fn coordinate_weights() {
        let c = WeightedComplex::builder(3)
            .coords(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])
            .simplex(&[0, 1, 2])
            .build()
            .unwrap();
        assert_eq!(c.weights(2).unwrap()[0], q_frac(1, 2));
        assert_eq!(c.weights(0).unwrap()[0], q_int(1));
    }

    #[test]
    fn degenerate_coords_rejected() {
        let c = WeightedComplex::builder(3)
            .coords(vec![vec![0.0], vec![1.0], vec![2.0]])
            .simplex(&[0, 1, 2])
            .build()
            .unwrap();
        assert!(c.weights(2).is_err());
    }

    #[test]
    fn out_of_range_vertex() {
        assert!(WeightedComplex::builder(2).simplex(&[0, 5]).build().is_err());
    }

    #[test]
    fn override_wins() {
        let c = WeightedComplex::builder(3).simplex(&[0, 1, 2]).weight(&[0, 1, 2], q_int(7)).build().unwrap();
        assert_eq!(c.weights(2).unwrap()[0], q_int(7));
        assert_eq!(c.weights(1).unwrap()[0], q_int(1));
    }
}
