mod common;

use std::collections::HashSet;
use std::sync::Arc;

use chainforge::corpus::{flat_torus, hexagonal_torus, klein_bottle, projective_plane, tetrahedron_sphere, Surface};
use chainforge::number::{q_frac, q_int, Q};
use chainforge::systolic::{fundamental_class, loewner_check, systole, ClosedManifoldComplex, CohomologyBasis};
use chainforge::{Error, WeightedComplex};

use common::*;

fn manifold(s: &Surface) -> ClosedManifoldComplex {
    ClosedManifoldComplex::new(Arc::new(s.complex().unwrap())).unwrap()
}

/// GF(2) row space of bit masks, kept in reduced form by leading bit.
#[derive(Default)]
struct Span {
    rows: Vec<u128>,
}

impl Span {
    fn reduce(&self, mut v: u128) -> u128 {
        for &r in &self.rows {
            let lead = 127 - r.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    fn insert(&mut self, v: u128) {
        let v = self.reduce(v);
        if v != 0 {
            self.rows.push(v);
            self.rows.sort_by_key(|r| std::cmp::Reverse(r.leading_zeros()));
            self.rows.reverse();
        }
    }

    fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }
}

struct Graph {
    edges: Vec<(usize, usize)>,
    len: Vec<i128>,
    scale: Scaled,
    adj: Vec<Vec<(usize, usize)>>,
    triangles: Span,
}

impl Graph {
    fn of(k: &WeightedComplex) -> Graph {
        assert!(k.count(1) <= 128);
        let edges: Vec<(usize, usize)> = k.simplices(1).iter().map(|e| (e.vertices()[0], e.vertices()[1])).collect();
        let scale = Scaled::of(k.weights(1).unwrap());
        let mut adj = vec![Vec::new(); k.vertex_count()];
        for (i, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        let mut triangles = Span::default();
        for col in boundary_columns(k, 2) {
            triangles.insert(col.iter().fold(0u128, |m, &(f, _)| m | 1 << f));
        }
        Graph { edges, len: scale.w.clone(), scale, adj, triangles }
    }

    fn weight(&self, mask: u128) -> i128 {
        (0..self.edges.len()).filter(|&e| mask >> e & 1 == 1).map(|e| self.len[e]).sum()
    }

    /// Shortest edge set with even degree everywhere that is not a sum of
    /// triangle boundaries, by walking all of `Z_1` through a cycle basis.
    fn shortest_nontrivial_cycle_by_enumeration(&self) -> Option<Q> {
        let n = self.adj.len();
        // fundamental cycles of a BFS spanning tree
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = std::collections::VecDeque::from([0]);
        seen[0] = true;
        let mut tree = HashSet::new();
        while let Some(u) = queue.pop_front() {
            for &(v, e) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some((u, e));
                    tree.insert(e);
                    queue.push_back(v);
                }
            }
        }
        let path = |mut v: usize| {
            let mut m = 0u128;
            while let Some((u, e)) = parent[v] {
                m ^= 1 << e;
                v = u;
            }
            m
        };
        let basis: Vec<u128> = (0..self.edges.len())
            .filter(|e| !tree.contains(e))
            .map(|e| (1u128 << e) ^ path(self.edges[e].0) ^ path(self.edges[e].1))
            .collect();
        assert!(basis.len() <= 24, "cycle space too large to enumerate");
        let mut z = 0u128;
        let mut best: Option<i128> = None;
        for i in 1u64..(1 << basis.len()) {
            z ^= basis[i.trailing_zeros() as usize];
            if !self.triangles.contains(z) {
                let w = self.weight(z);
                best = Some(best.map_or(w, |b| b.min(w)));
            }
        }
        best.map(|b| self.scale.to_q(b))
    }

    /// Shortest simple cycle not in the triangle span, among cycles of
    /// length at most `cap`, by depth-first search from each lowest vertex.
    fn shortest_nontrivial_simple_cycle(&self, cap: &Q) -> Option<Q> {
        let cap = (cap * Q::from_integer(self.scale.denom.clone())).to_integer();
        let cap: i128 = cap.try_into().unwrap();
        let mut best: Option<i128> = None;
        for start in 0..self.adj.len() {
            let mut on_path = vec![false; self.adj.len()];
            on_path[start] = true;
            self.dfs(start, start, 0, 0, 0, cap, &mut on_path, &mut best);
        }
        best.map(|b| self.scale.to_q(b))
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(&self, start: usize, u: usize, mask: u128, len: i128, edges: usize, cap: i128, on: &mut [bool], best: &mut Option<i128>) {
        for &(v, e) in &self.adj[u] {
            let l = len + self.len[e];
            if l > cap || best.is_some_and(|b| l >= b) {
                continue;
            }
            if v == start && edges >= 2 {
                let m = mask | 1 << e;
                if !self.triangles.contains(m) {
                    *best = Some(l);
                }
            } else if v > start && !on[v] {
                on[v] = true;
                self.dfs(start, v, mask | 1 << e, l, edges + 1, cap, on, best);
                on[v] = false;
            }
        }
    }
}

#[test]
fn systole_matches_enumeration_of_the_cycle_space() {
    for s in [flat_torus(3), projective_plane(), hexagonal_torus(3), klein_bottle(3, 3)] {
        let m = manifold(&s);
        let expect = Graph::of(m.complex()).shortest_nontrivial_cycle_by_enumeration();
        assert_eq!(systole(&m).unwrap().length, expect, "{}", s.name);
    }
}

#[test]
fn systole_matches_simple_cycle_search() {
    for s in [flat_torus(3), flat_torus(4), flat_torus(5), hexagonal_torus(4), klein_bottle(4, 4), projective_plane()] {
        let m = manifold(&s);
        let sys = systole(&m).unwrap().length.unwrap();
        let found = Graph::of(m.complex()).shortest_nontrivial_simple_cycle(&sys);
        assert_eq!(found, Some(sys), "{}", s.name);
    }
}

#[test]
fn known_systoles() {
    assert_eq!(systole(&manifold(&flat_torus(3))).unwrap().length, Some(q_int(3)));
    assert_eq!(systole(&manifold(&flat_torus(5))).unwrap().length, Some(q_int(5)));
    assert_eq!(systole(&manifold(&projective_plane())).unwrap().length, Some(q_int(3)));
}

#[test]
fn witness_is_a_nontrivial_cycle_of_the_reported_length() {
    for s in [flat_torus(4), hexagonal_torus(5), projective_plane(), klein_bottle(3, 4)] {
        let m = manifold(&s);
        let sys = systole(&m).unwrap();
        let w = sys.witness.unwrap();
        assert!(w.boundary().unwrap().reduce_mod_p(2).unwrap().is_zero(), "{}", s.name);
        let weights = m.complex().weights(1).unwrap();
        let len: Q = w.support().iter().map(|&e| &weights[e]).sum();
        assert_eq!(Some(len), sys.length);
        assert!(!CohomologyBasis::new(&m).holonomy(&w).is_zero(), "{}", s.name);
        let mask = w.support().iter().fold(0u128, |a, &e| a | 1 << e);
        assert!(!Graph::of(m.complex()).triangles.contains(mask));
    }
}

#[test]
fn sphere_has_no_systole() {
    let s = systole(&manifold(&tetrahedron_sphere())).unwrap();
    assert_eq!((s.length, s.first_betti), (None, 0));
}

#[test]
fn first_betti_numbers() {
    for (s, b) in [(flat_torus(3), 2), (projective_plane(), 1), (klein_bottle(3, 3), 2), (tetrahedron_sphere(), 0)] {
        assert_eq!(systole(&manifold(&s)).unwrap().first_betti, b, "{}", s.name);
    }
}

#[test]
fn euler_characteristic_and_orientability() {
    for (s, chi, orientable) in [
        (tetrahedron_sphere(), 2, true),
        (flat_torus(4), 0, true),
        (hexagonal_torus(3), 0, true),
        (projective_plane(), 1, false),
        (klein_bottle(3, 4), 0, false),
    ] {
        let m = manifold(&s);
        assert_eq!(m.euler_characteristic(), chi, "{}", s.name);
        assert_eq!(m.is_orientable(), orientable, "{}", s.name);
    }
}

#[test]
fn fundamental_class_is_a_full_cycle() {
    for s in [tetrahedron_sphere(), flat_torus(3), projective_plane()] {
        let m = manifold(&s);
        let c = fundamental_class(&m).unwrap();
        assert_eq!(c.support().len(), m.complex().count(2));
        assert!(c.boundary().unwrap().is_zero());
    }
}

#[test]
fn non_manifolds_are_rejected() {
    let disk = Arc::new(WeightedComplex::builder(3).simplex(&[0, 1, 2]).build().unwrap());
    assert!(matches!(ClosedManifoldComplex::new(disk), Err(Error::NotClosedManifold(_))));

    // three triangles on one edge
    let book = Arc::new(
        WeightedComplex::builder(5)
            .simplices([[0, 1, 2], [0, 1, 3], [0, 1, 4], [0, 2, 3], [0, 3, 4], [0, 2, 4], [1, 2, 3], [1, 3, 4], [1, 2, 4]])
            .build()
            .unwrap(),
    );
    assert!(matches!(ClosedManifoldComplex::new(book), Err(Error::NotClosedManifold(_))));

    let mut tris = tetrahedron_sphere().triangles;
    tris.extend(tetrahedron_sphere().triangles.iter().map(|t| t.map(|v| v + 4)));
    let two = Arc::new(WeightedComplex::builder(8).simplices(tris.iter()).build().unwrap());
    assert!(matches!(ClosedManifoldComplex::new(two), Err(Error::NotClosedManifold(_))));
}

#[test]
fn loewner_holds_on_tori_and_rejects_other_surfaces() {
    for k in 3..=6 {
        let c = loewner_check(&manifold(&flat_torus(k))).unwrap();
        assert!(c.holds);
        assert_eq!(c.area, q_frac(k as i64 * k as i64, 1));
        assert!((c.ratio - 3f64.sqrt() / 2.0).abs() < 1e-9);
    }
    let hex = loewner_check(&manifold(&hexagonal_torus(4))).unwrap();
    assert!(hex.holds && hex.ratio > 0.99);
    for s in [projective_plane(), klein_bottle(3, 3), tetrahedron_sphere()] {
        assert!(matches!(loewner_check(&manifold(&s)), Err(Error::NotATorus(_))), "{}", s.name);
    }
}
