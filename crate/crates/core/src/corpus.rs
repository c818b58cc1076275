//! Deterministic generators for the test complexes: sampled circles, flat
//! and hexagonal tori, the projective plane, a Klein bottle, the tetrahedral
//! sphere and random Rips complexes.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Chain, WeightedComplex};
use crate::error::Result;
use crate::metric::{build_rips, FiniteMetricSpace, DEFAULT_RIPS_BUDGET};
use crate::number::{q_frac, q_int, q_sqrt, Q};

/// Arc-length metric on `n` equally spaced points of a circle.
pub fn circle_metric(n: usize, circumference: &Q) -> FiniteMetricSpace {
    let step = circumference / q_int(n as i64);
    let dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = i.abs_diff(j);
                    &step * q_int(k.min(n - k) as i64)
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::new(dist).expect("circle metric is a metric")
}

/// Full Rips complex (scale = diameter) of the `n`-gon up to dimension 2,
/// together with the mod-2 cycle through consecutive vertices.
pub fn circle_ambient(n: usize, circumference: &Q) -> Result<(Arc<WeightedComplex>, Chain)> {
    let m = Arc::new(circle_metric(n, circumference));
    let k = Arc::new(build_rips(&m, &m.diameter(), 2, DEFAULT_RIPS_BUDGET)?);
    let cycle = polygon_cycle(&k, &(0..n).collect::<Vec<_>>())?;
    Ok((k, cycle))
}

/// Mod-2 edge cycle through the given vertices in order (closing back to the first).
pub fn polygon_cycle(complex: &Arc<WeightedComplex>, verts: &[usize]) -> Result<Chain> {
    let terms: Vec<([usize; 2], i64)> =
        (0..verts.len()).map(|i| ([verts[i], verts[(i + 1) % verts.len()]], 1)).collect();
    Chain::from_terms(complex, 1, Some(2), &terms)
}

/// Triangulated surface given by vertex count, triangles and per-edge lengths.
#[derive(Debug, Clone)]
pub struct Surface {
    pub name: String,
    pub vertex_count: usize,
    pub triangles: Vec<[usize; 3]>,
    /// Coordinates in some `R^d`, when the surface comes with an embedding.
    pub coords: Option<Vec<Vec<f64>>>,
    pub edge_lengths: HashMap<(usize, usize), Q>,
    /// Exact triangle areas, when known.
    pub areas: Option<Vec<Q>>,
}

impl Surface {
    pub fn complex(&self) -> Result<WeightedComplex> {
        let mut b = WeightedComplex::builder(self.vertex_count)
            .simplices(self.triangles.iter())
            .edge_lengths(self.edge_lengths.clone());
        if let Some(c) = &self.coords {
            b = b.coords(c.clone());
        }
        if let Some(areas) = &self.areas {
            for (t, a) in self.triangles.iter().zip(areas) {
                b = b.weight(t, a.clone());
            }
        }
        b.build()
    }
}

fn edge_map(triangles: &[[usize; 3]], mut len: impl FnMut(usize, usize) -> Q) -> HashMap<(usize, usize), Q> {
    let mut out = HashMap::new();
    for t in triangles {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            out.entry((a.min(b), a.max(b))).or_insert_with(|| len(a, b));
        }
    }
    out
}

/// Square flat torus: `k × k` unit grid, each square split along a diagonal.
///
/// Vertices sit on the Clifford torus in `R^4`, scaled so grid edges have
/// chord length one.
pub fn flat_torus(k: usize) -> Surface {
    let idx = |i: usize, j: usize| (i % k) * k + (j % k);
    let mut triangles = Vec::with_capacity(2 * k * k);
    for i in 0..k {
        for j in 0..k {
            triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            triangles.push([idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)]);
        }
    }
    let radius = 1.0 / (2.0 * (PI / k as f64).sin());
    let coords = (0..k * k)
        .map(|v| {
            let (a, b) = ((v / k) as f64, (v % k) as f64);
            let (ta, tb) = (2.0 * PI * a / k as f64, 2.0 * PI * b / k as f64);
            vec![radius * ta.cos(), radius * ta.sin(), radius * tb.cos(), radius * tb.sin()]
        })
        .collect();
    let sqrt2 = q_sqrt(&q_int(2)).expect("positive");
    let edge_lengths = edge_map(&triangles, |a, b| {
        let (ai, aj, bi, bj) = (a / k, a % k, b / k, b % k);
        if ai != bi && aj != bj {
            sqrt2.clone()
        } else {
            q_int(1)
        }
    });
    Surface {
        name: format!("torus{k}x{k}"),
        vertex_count: k * k,
        areas: Some(vec![q_frac(1, 2); triangles.len()]),
        triangles,
        coords: Some(coords),
        edge_lengths,
    }
}

/// Hexagonal flat torus: `k × k` grid of the triangular lattice, unit edges.
pub fn hexagonal_torus(k: usize) -> Surface {
    let idx = |i: usize, j: usize| (i % k) * k + (j % k);
    let mut triangles = Vec::with_capacity(2 * k * k);
    for i in 0..k {
        for j in 0..k {
            triangles.push([idx(i, j), idx(i + 1, j), idx(i, j + 1)]);
            triangles.push([idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    Surface {
        name: format!("hextorus{k}"),
        vertex_count: k * k,
        edge_lengths: edge_map(&triangles, |_, _| q_int(1)),
        triangles,
        coords: None,
        areas: None,
    }
}

/// The six-vertex projective plane with unit edges.
pub fn projective_plane() -> Surface {
    let triangles: Vec<[usize; 3]> = [
        [1, 2, 3],
        [1, 3, 4],
        [1, 4, 5],
        [1, 5, 6],
        [1, 6, 2],
        [2, 3, 5],
        [3, 4, 6],
        [4, 5, 2],
        [5, 6, 3],
        [6, 2, 4],
    ]
    .iter()
    .map(|t| [t[0] - 1, t[1] - 1, t[2] - 1])
    .collect();
    Surface {
        name: "rp2".into(),
        vertex_count: 6,
        edge_lengths: edge_map(&triangles, |_, _| q_int(1)),
        triangles,
        coords: None,
        areas: None,
    }
}

/// Klein bottle from an `a × b` grid whose horizontal wrap reverses the
/// vertical direction; unit edges and unit diagonals.
pub fn klein_bottle(a: usize, b: usize) -> Surface {
    let idx = |i: usize, j: usize| {
        if i % (2 * a) >= a {
            (i % a) * b + (b - j % b) % b
        } else {
            (i % a) * b + j % b
        }
    };
    let mut triangles = Vec::with_capacity(2 * a * b);
    for i in 0..a {
        for j in 0..b {
            triangles.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            triangles.push([idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)]);
        }
    }
    Surface {
        name: format!("klein{a}x{b}"),
        vertex_count: a * b,
        edge_lengths: edge_map(&triangles, |_, _| q_int(1)),
        triangles,
        coords: None,
        areas: None,
    }
}

/// Boundary of the tetrahedron.
pub fn tetrahedron_sphere() -> Surface {
    let triangles = vec![[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    Surface {
        name: "sphere4".into(),
        vertex_count: 4,
        edge_lengths: edge_map(&triangles, |_, _| q_int(1)),
        triangles,
        coords: None,
        areas: None,
    }
}

/// `n` distinct random points of the integer grid `[0, side]^2` with the ℓ1 metric.
pub fn random_grid_metric(n: usize, side: i64, seed: u64) -> FiniteMetricSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<(i64, i64)> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = (rng.gen_range(0..=side), rng.gen_range(0..=side));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let dist = pts
        .iter()
        .map(|a| pts.iter().map(|b| q_int((a.0 - b.0).abs() + (a.1 - b.1).abs())).collect())
        .collect();
    FiniteMetricSpace::new(dist).expect("l1 distances form a metric")
}
