//! Random instances and brute-force reference computations shared by the
//! integration tests. The references work on weights scaled to integers and
//! never call the solvers they check.

#![allow(dead_code)]

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use chainforge::complex::reduce_coeff;
use chainforge::metric::{build_rips, FiniteMetricSpace};
use chainforge::number::{q_int, Q};
use chainforge::{Chain, WeightedComplex};

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Weights of one dimension as integers over a common denominator.
pub struct Scaled {
    pub w: Vec<i128>,
    pub denom: BigInt,
}

impl Scaled {
    pub fn of(weights: &[Q]) -> Scaled {
        let denom = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let w = weights
            .iter()
            .map(|x| (x.numer() * (&denom / x.denom())).to_i128().expect("scaled weight fits in i128"))
            .collect();
        Scaled { w, denom }
    }

    pub fn to_q(&self, v: i128) -> Q {
        Q::new(BigInt::from(v), self.denom.clone())
    }
}

/// Random points in `[0, side]^3` (integer coordinates), then a random
/// selection of triangles and tetrahedra on them; retried until every
/// simplex is nondegenerate and each dimension has at most `cap` simplices.
pub fn random_complex(rng: &mut ChaCha8Rng, cap: usize, with_tets: bool) -> Arc<WeightedComplex> {
    loop {
        let n = rng.gen_range(4..=6);
        let coords: Vec<Vec<f64>> = (0..n).map(|_| (0..3).map(|_| rng.gen_range(0..=6) as f64).collect()).collect();
        let mut tris: Vec<[usize; 3]> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    tris.push([a, b, c]);
                }
            }
        }
        tris.shuffle(rng);
        let mut gens: Vec<Vec<usize>> = tris.iter().take(rng.gen_range(2..=6)).map(|t| t.to_vec()).collect();
        if with_tets && n >= 4 {
            let mut v: Vec<usize> = (0..n).collect();
            for _ in 0..rng.gen_range(1..=2) {
                v.shuffle(rng);
                gens.push(v[..4].to_vec());
            }
        }
        let Ok(k) = WeightedComplex::builder(n).simplices(gens.iter()).coords(coords).build() else { continue };
        let ok = (0..=k.top_dim()).all(|d| k.count(d) <= cap && k.weights(d).is_ok());
        if ok {
            return Arc::new(k);
        }
    }
}

/// Random chain of dimension `dim` with coefficients in `[-max, max]`.
pub fn random_chain(rng: &mut ChaCha8Rng, k: &Arc<WeightedComplex>, dim: usize, max: i64) -> Chain {
    let terms: Vec<(usize, i64)> = (0..k.count(dim)).map(|i| (i, rng.gen_range(-max..=max))).collect();
    Chain::from_indices(k, dim, None, terms).unwrap()
}

/// `n` distinct integer points of `[0, side]^2` with the ℓ1 metric.
pub fn random_l1_metric(rng: &mut ChaCha8Rng, n: usize, side: i64) -> Arc<FiniteMetricSpace> {
    let mut pts: Vec<(i64, i64)> = Vec::new();
    while pts.len() < n {
        let p = (rng.gen_range(0..=side), rng.gen_range(0..=side));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let dist = pts.iter().map(|a| pts.iter().map(|b| q_int((a.0 - b.0).abs() + (a.1 - b.1).abs())).collect()).collect();
    Arc::new(FiniteMetricSpace::new(dist).unwrap())
}

pub fn full_rips(m: &Arc<FiniteMetricSpace>, max_dim: usize) -> Arc<WeightedComplex> {
    Arc::new(build_rips(m, &m.diameter(), max_dim, 10_000_000).unwrap())
}

/// Dense boundary coefficients `∂e_j` of the simplices of dimension `dim`,
/// recomputed from vertex lists with the alternating sign rule.
pub fn boundary_columns(k: &WeightedComplex, dim: usize) -> Vec<Vec<(usize, i64)>> {
    k.simplices(dim)
        .iter()
        .map(|s| {
            let v = s.vertices();
            (0..v.len())
                .map(|j| {
                    let mut face = v.to_vec();
                    face.remove(j);
                    let f = chainforge::Simplex::oriented(&face).unwrap().0;
                    (k.index_of(&f).unwrap(), if j % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect()
}

/// `min_Q Σ w_i |c_i − p Q_i|` over every integer vector with `|Q_i| <= bound`,
/// enumerated coordinate by coordinate in odometer order.
pub fn brute_mass_mod_p(coeffs: &[i64], w: &[i128], p: i64, bound: i64) -> i128 {
    let n = coeffs.len();
    let cost = |i: usize, q: i64| w[i] * ((coeffs[i] - p * q).abs() as i128);
    let mut q = vec![-bound; n];
    let mut total: i128 = (0..n).map(|i| cost(i, q[i])).sum();
    let mut best = total;
    loop {
        let mut i = 0;
        while i < n && q[i] == bound {
            total -= cost(i, q[i]);
            q[i] = -bound;
            total += cost(i, q[i]);
            i += 1;
        }
        if i == n {
            return best;
        }
        total -= cost(i, q[i]);
        q[i] += 1;
        total += cost(i, q[i]);
        best = best.min(total);
    }
}

/// Flat norm `min M(T − ∂S) + M(S)` by depth-first enumeration of integer
/// `(k+1)`-chains `S`, optionally with the residual reduced mod `p`
/// coordinate by coordinate.
///
/// Coefficients are tried in order of magnitude and a branch stops once the
/// mass of `S` so far plus the residual on settled faces reaches the best
/// value, so every `S` that could do better is visited.
pub fn brute_flat_norm(t: &Chain, p: Option<i64>) -> Q {
    let k = t.complex();
    let d = t.dim();
    let mut all = k.weights(d).unwrap().to_vec();
    let nf = all.len();
    all.extend_from_slice(k.weights(d + 1).unwrap());
    let scaled = Scaled::of(&all);
    let (fw, tw) = scaled.w.split_at(nf);
    let cols = boundary_columns(k, d + 1);
    let n = cols.len();
    // a face is settled by the last column that touches it
    let mut settle: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for f in 0..nf {
        let last = (0..n).filter(|&j| cols[j].iter().any(|&(g, _)| g == f)).max();
        settle[last.map_or(0, |j| j + 1)].push(f);
    }
    let face_cost = move |r: i64| -> i128 {
        match p {
            None => r.abs() as i128,
            Some(p) => (r - p * ((r as f64 / p as f64).round() as i64)).abs() as i128,
        }
    };
    let residual: Vec<i64> = (0..nf).map(|i| t.coeff(i)).collect();
    let base: i128 = settle[0].iter().map(|&f| fw[f] * face_cost(residual[f])).sum();
    let best: i128 = (0..nf).map(|f| fw[f] * face_cost(residual[f])).sum();

    struct Search<'a, F: Fn(i64) -> i128> {
        cols: &'a [Vec<(usize, i64)>],
        settle: &'a [Vec<usize>],
        fw: &'a [i128],
        tw: &'a [i128],
        cost: F,
        residual: Vec<i64>,
        best: i128,
    }
    impl<F: Fn(i64) -> i128> Search<'_, F> {
        fn shift(&mut self, j: usize, s: i64) {
            for &(f, sign) in &self.cols[j] {
                self.residual[f] -= sign * s;
            }
        }
        fn go(&mut self, j: usize, partial: i128) {
            if partial >= self.best {
                return;
            }
            if j == self.cols.len() {
                self.best = partial;
                return;
            }
            let mut m: i64 = 0;
            while partial + self.tw[j] * (m as i128) < self.best {
                for s in if m == 0 { vec![0] } else { vec![m, -m] } {
                    self.shift(j, s);
                    let settled: i128 =
                        self.settle[j + 1].iter().map(|&f| self.fw[f] * (self.cost)(self.residual[f])).sum();
                    self.go(j + 1, partial + self.tw[j] * (m as i128) + settled);
                    self.shift(j, -s);
                }
                m += 1;
            }
        }
    }
    let mut search = Search { cols: &cols, settle: &settle, fw, tw, cost: face_cost, residual, best };
    search.go(0, base);
    scaled.to_q(search.best)
}

/// Mass of a chain recomputed from the weights, with optional reduction mod `p`.
pub fn mass_of(c: &Chain, p: Option<i64>) -> Q {
    let w = c.complex().weights(c.dim()).unwrap();
    c.iter()
        .map(|(i, x)| {
            let x = p.map_or(x, |p| reduce_coeff(x, p));
            &w[i] * q_int(x.abs())
        })
        .fold(Q::zero(), |a, b| a + b)
}

/// Largest pairwise distance among the given vertices.
pub fn diameter(m: &FiniteMetricSpace, verts: &[usize]) -> Q {
    let mut d = Q::zero();
    for &a in verts {
        for &b in verts {
            if m.dist(a, b) > &d {
                d = m.dist(a, b).clone();
            }
        }
    }
    d
}

pub fn is_nonnegative(q: &Q) -> bool {
    !q.is_negative()
}
