use std::sync::Arc;

use crate::complex::{Chain, WeightedComplex};
use crate::error::{Error, Result};
use crate::number::Q;

/// A closed, connected pseudo-manifold: every codimension-one simplex is a
/// face of exactly two top simplices.
#[derive(Debug, Clone)]
pub struct ClosedManifoldComplex {
    complex: Arc<WeightedComplex>,
    dim: usize,
    incidence: Vec<usize>,
}

impl ClosedManifoldComplex {
    pub fn new(complex: Arc<WeightedComplex>) -> Result<Self> {
        let n = complex.top_dim();
        if n == 0 || complex.count(n) == 0 {
            return Err(Error::NotClosedManifold("complex has no simplices of positive dimension".into()));
        }
        let incidence: Vec<usize> = (0..complex.count(n - 1)).map(|i| complex.cofaces(n - 1, i).len()).collect();
        let bad: Vec<String> = incidence
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 2)
            .map(|(i, c)| format!("{:?} in {c} top simplices", complex.simplex(n - 1, i).vertices()))
            .collect();
        if !bad.is_empty() {
            let shown = bad.iter().take(8).cloned().collect::<Vec<_>>().join(", ");
            let more = if bad.len() > 8 { format!(" and {} more", bad.len() - 8) } else { String::new() };
            return Err(Error::NotClosedManifold(format!("faces not shared by exactly two top simplices: {shown}{more}")));
        }
        let mut used = vec![false; complex.vertex_count()];
        for s in complex.simplices(n) {
            for &v in s.vertices() {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::NotClosedManifold(format!("vertex {v} lies in no top simplex")));
        }
        if components(&complex) != 1 {
            return Err(Error::NotClosedManifold("complex is not connected".into()));
        }
        Ok(ClosedManifoldComplex { complex, dim: n, incidence })
    }

    pub fn complex(&self) -> &Arc<WeightedComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of top simplices containing each codimension-one simplex (all 2).
    pub fn incidence(&self) -> &[usize] {
        &self.incidence
    }

    /// Total weight of the top simplices.
    pub fn volume(&self) -> Result<Q> {
        Ok(self.complex.weights(self.dim)?.iter().sum())
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim).map(|d| if d % 2 == 0 { 1 } else { -1 } * self.complex.count(d) as i64).sum()
    }

    /// Whether the top simplices admit orientations that cancel on every shared face.
    pub fn is_orientable(&self) -> bool {
        let (c, n) = (&self.complex, self.dim);
        let top = c.count(n);
        let mut sign = vec![0i8; top];
        for start in 0..top {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(s) = stack.pop() {
                for (j, &f) in c.faces(n, s).iter().enumerate() {
                    let induced = sign[s] * if j % 2 == 0 { 1 } else { -1 };
                    for &t in c.cofaces(n - 1, f) {
                        if t == s {
                            continue;
                        }
                        let k = c.faces(n, t).iter().position(|&g| g == f).expect("coface contains face");
                        let want = -induced * if k % 2 == 0 { 1 } else { -1 };
                        if sign[t] == 0 {
                            sign[t] = want;
                            stack.push(t);
                        } else if sign[t] != want {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn components(c: &WeightedComplex) -> usize {
    let n = c.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in c.simplices(1) {
        let (a, b) = (find(&mut parent, e.vertices()[0]), find(&mut parent, e.vertices()[1]));
        parent[a] = b;
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

/// The mod-2 fundamental class: every top simplex with coefficient one.
pub fn fundamental_class(m: &ClosedManifoldComplex) -> Result<Chain> {
    let c = m.complex();
    let class = Chain::from_indices(c, m.dim(), Some(2), (0..c.count(m.dim())).map(|i| (i, 1)))?;
    let b = class.boundary()?;
    if !b.is_zero() {
        return Err(Error::NotClosedManifold(format!("fundamental class has boundary on {} faces", b.len())));
    }
    Ok(class)
}
