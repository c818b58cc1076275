//! Finite metric spaces, ε-nets, Kuratowski embeddings and Rips complexes.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::complex::WeightedComplex;
use crate::error::{Error, Result};
use crate::number::{q_from_f64, Q};

/// Symmetric distance matrix over `n` points with exact rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteMetricSpace {
    dist: Vec<Vec<Q>>,
}

impl FiniteMetricSpace {
    /// Validates symmetry, zero diagonal, positivity off the diagonal and the
    /// triangle inequality.
    pub fn new(dist: Vec<Vec<Q>>) -> Result<Self> {
        let n = dist.len();
        for (i, row) in dist.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMetric(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if !row[i].is_zero() {
                return Err(Error::InvalidMetric(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if row[j] != dist[j][i] {
                    return Err(Error::InvalidMetric(format!("asymmetric entries at ({i}, {j})")));
                }
                if !row[j].is_positive() {
                    return Err(Error::InvalidMetric(format!("points {j} and {i} have distance {}", row[j])));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(Error::InvalidMetric(format!("triangle inequality fails for ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { dist })
    }

    /// Float matrix rounded onto the dyadic grid, then validated.
    pub fn from_f64(dist: &[Vec<f64>]) -> Result<Self> {
        FiniteMetricSpace::new(dist.iter().map(|r| r.iter().map(|&x| q_from_f64(x)).collect()).collect())
    }

    /// Shortest-path metric of a connected weighted graph.
    pub fn shortest_paths(n: usize, edges: &[(usize, usize, Q)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (a, b, w) in edges {
            if *a >= n || *b >= n {
                return Err(Error::InvalidMetric(format!("edge ({a}, {b}) out of range")));
            }
            if !w.is_positive() {
                return Err(Error::InvalidMetric(format!("edge ({a}, {b}) has nonpositive length")));
            }
            adj[*a].push((*b, w.clone()));
            adj[*b].push((*a, w.clone()));
        }
        let mut dist = Vec::with_capacity(n);
        for s in 0..n {
            let row = dijkstra(&adj, s);
            if let Some(t) = row.iter().position(Option::is_none) {
                return Err(Error::InvalidMetric(format!("graph disconnected: {t} unreachable from {s}")));
            }
            dist.push(row.into_iter().map(Option::unwrap).collect());
        }
        Ok(FiniteMetricSpace { dist })
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn dist(&self, i: usize, j: usize) -> &Q {
        &self.dist[i][j]
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.dist[i]
    }

    pub fn diameter(&self) -> Q {
        self.dist.iter().flatten().max().cloned().unwrap_or_else(Q::zero)
    }

    /// Smallest distance between distinct points, `None` for fewer than two points.
    pub fn min_positive_distance(&self) -> Option<Q> {
        (0..self.len()).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| self.dist[i][j].clone()).min()
    }

    /// Restriction to a subset of points, in the given order.
    pub fn subspace(&self, points: &[usize]) -> FiniteMetricSpace {
        FiniteMetricSpace {
            dist: points.iter().map(|&i| points.iter().map(|&j| self.dist[i][j].clone()).collect()).collect(),
        }
    }

    /// Distance from a point to the nearest point of a nonempty set.
    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> Option<Q> {
        set.iter().map(|&y| self.dist[x][y].clone()).min()
    }
}

fn dijkstra(adj: &[Vec<(usize, Q)>], source: usize) -> Vec<Option<Q>> {
    let mut best: Vec<Option<Q>> = vec![None; adj.len()];
    let mut done = vec![false; adj.len()];
    let mut heap = BinaryHeap::new();
    best[source] = Some(Q::zero());
    heap.push(Reverse((Q::zero(), source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for (v, w) in &adj[u] {
            let nd = &d + w;
            if best[*v].as_ref().is_none_or(|b| nd < *b) {
                best[*v] = Some(nd.clone());
                heap.push(Reverse((nd, *v)));
            }
        }
    }
    best
}

/// Order in which candidate points are offered to the ε-net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NetStrategy {
    /// Repeatedly add the point farthest from the current net, seeded at 0.
    #[default]
    FarthestPoint,
    /// Scan points by index and keep every point at distance `>= ε` from those kept.
    IndexScan,
}

/// Maximal ε-separated subset: pairwise distances `>= ε`, every point within `< ε`.
pub fn maximal_epsilon_net(space: &FiniteMetricSpace, epsilon: &Q, strategy: NetStrategy) -> Result<Vec<usize>> {
    if !epsilon.is_positive() {
        return Err(Error::Precondition(format!("epsilon must be positive, got {epsilon}")));
    }
    let n = space.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut net = vec![0];
    match strategy {
        NetStrategy::FarthestPoint => {
            let mut to_net: Vec<Q> = space.row(0).to_vec();
            loop {
                // first index wins ties
                let (far, d) = to_net.iter().enumerate().fold((0, &to_net[0]), |acc, (i, d)| if d > acc.1 { (i, d) } else { acc });
                if d < epsilon {
                    break;
                }
                net.push(far);
                for (i, slot) in to_net.iter_mut().enumerate() {
                    if space.dist(i, far) < slot {
                        *slot = space.dist(i, far).clone();
                    }
                }
            }
        }
        NetStrategy::IndexScan => {
            for x in 1..n {
                if net.iter().all(|&y| space.dist(x, y) >= epsilon) {
                    net.push(x);
                }
            }
        }
    }
    Ok(net)
}

/// Distance-function embedding `x ↦ (d(x, q))_{q ∈ net}` into sup-norm coordinates.
#[derive(Debug, Clone)]
pub struct Embedding {
    source: Arc<FiniteMetricSpace>,
    net: Vec<usize>,
    coords: Vec<Vec<Q>>,
}

pub fn kuratowski_embed(space: &Arc<FiniteMetricSpace>, net: &[usize]) -> Result<Embedding> {
    if net.is_empty() {
        return Err(Error::Precondition("embedding net is empty".into()));
    }
    if let Some(&q) = net.iter().find(|&&q| q >= space.len()) {
        return Err(Error::Precondition(format!("net point {q} out of range")));
    }
    let coords = (0..space.len()).map(|x| net.iter().map(|&q| space.dist(x, q).clone()).collect()).collect();
    Ok(Embedding { source: space.clone(), net: net.to_vec(), coords })
}

impl Embedding {
    pub fn source(&self) -> &Arc<FiniteMetricSpace> {
        &self.source
    }

    pub fn net(&self) -> &[usize] {
        &self.net
    }

    pub fn coords(&self) -> &[Vec<Q>] {
        &self.coords
    }

    /// Sup-norm distance between the images of two points.
    pub fn image_dist(&self, x: usize, y: usize) -> Q {
        self.coords[x]
            .iter()
            .zip(&self.coords[y])
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Metric induced on the image; fails if the net identifies two points.
    pub fn image_space(&self) -> Result<FiniteMetricSpace> {
        let n = self.coords.len();
        let dist: Vec<Vec<Q>> = (0..n).map(|x| (0..n).map(|y| self.image_dist(x, y)).collect()).collect();
        for x in 0..n {
            for y in 0..x {
                if dist[x][y].is_zero() {
                    return Err(Error::InvalidMetric(format!("net too coarse: points {y} and {x} have the same image")));
                }
            }
        }
        Ok(FiniteMetricSpace { dist })
    }

    /// Largest and smallest ratio `‖ι(x) − ι(y)‖ / d(x, y)` over distinct pairs.
    pub fn distortion(&self) -> Distortion {
        let n = self.coords.len();
        let mut out: Option<Distortion> = None;
        for x in 0..n {
            for y in 0..x {
                let r = self.image_dist(x, y) / self.source.dist(x, y);
                out = Some(match out {
                    None => Distortion { expansion: r.clone(), contraction: r },
                    Some(d) => Distortion {
                        expansion: if r > d.expansion { r.clone() } else { d.expansion },
                        contraction: if r < d.contraction { r } else { d.contraction },
                    },
                });
            }
        }
        out.unwrap_or(Distortion { expansion: Q::one(), contraction: Q::one() })
    }

    /// Largest `d(x, y) − ‖ι(x) − ι(y)‖`, the additive slack of the embedding.
    pub fn additive_slack(&self) -> Q {
        let n = self.coords.len();
        (0..n)
            .flat_map(|x| (0..x).map(move |y| (x, y)))
            .map(|(x, y)| self.source.dist(x, y) - self.image_dist(x, y))
            .max()
            .unwrap_or_else(Q::zero)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distortion {
    pub expansion: Q,
    pub contraction: Q,
}

/// Default cap on the number of simplices a Rips construction may produce.
pub const DEFAULT_RIPS_BUDGET: usize = 2_000_000;

/// Vietoris–Rips complex: every vertex set of diameter `<= scale`, up to `max_dim`.
///
/// Weights come from Cayley–Menger on the metric, with the diameter bound as
/// fallback for non-Euclidean simplices.
pub fn build_rips(space: &Arc<FiniteMetricSpace>, scale: &Q, max_dim: usize, budget: usize) -> Result<WeightedComplex> {
    if !scale.is_positive() {
        return Err(Error::Precondition(format!("scale must be positive, got {scale}")));
    }
    if max_dim < 1 {
        return Err(Error::Precondition("max_dim must be at least 1".into()));
    }
    let n = space.len();
    let nbrs: Vec<Vec<usize>> =
        (0..n).map(|i| (i + 1..n).filter(|&j| space.dist(i, j) <= scale).collect()).collect();
    let mut simplices: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut frontier: Vec<(Vec<usize>, Vec<usize>)> = (0..n).map(|v| (vec![v], nbrs[v].clone())).collect();
    for _ in 0..max_dim {
        let mut next = Vec::new();
        for (s, cand) in &frontier {
            for (pos, &v) in cand.iter().enumerate() {
                let mut t = s.clone();
                t.push(v);
                let rest: Vec<usize> = cand[pos + 1..].iter().copied().filter(|&w| space.dist(v, w) <= scale).collect();
                simplices.push(t.clone());
                if simplices.len() > budget {
                    return Err(Error::BudgetExceeded { count: simplices.len(), budget });
                }
                next.push((t, rest));
            }
        }
        frontier = next;
    }
    WeightedComplex::builder(n).simplices(simplices).already_closed().metric(space.clone()).build()
}
