use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::manifold::ClosedManifoldComplex;
use crate::complex::{Chain, ChainJson};
use crate::error::{Error, Result};
use crate::flatnorm::mass_p;
use crate::gf2::{solve_system, BitVec, EchelonBasis};
use crate::number::{ExactReal, Q};

/// Mod-2 first cohomology of a surface, as cocycle values on edges.
///
/// `signature(e)` packs the value of every basis cocycle on edge `e`; an
/// edge cycle is homologically nontrivial exactly when the XOR of its edge
/// signatures is nonzero.
#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    signatures: Vec<BitVec>,
    rank: usize,
}

impl CohomologyBasis {
    pub fn new(m: &ClosedManifoldComplex) -> Self {
        let c = m.complex();
        let edges = c.count(1);
        let triangles = c.count(2);
        // Cocycles: kernel of the coboundary C^1 -> C^2, one column per edge.
        let columns: Vec<BitVec> = (0..edges).map(|e| BitVec::from_ones(triangles, c.cofaces(1, e).iter().copied())).collect();
        let cocycles = solve_system(&columns, triangles, &BitVec::zeros(triangles)).null_basis;
        let mut span = EchelonBasis::new(edges, false);
        for v in 0..c.vertex_count() {
            span.insert(&BitVec::from_ones(edges, c.cofaces(0, v).iter().copied()));
        }
        let mut generators = Vec::new();
        for z in cocycles {
            if !span.contains(&z) {
                span.insert(&z);
                generators.push(z);
            }
        }
        let rank = generators.len();
        let signatures =
            (0..edges).map(|e| BitVec::from_ones(rank, (0..rank).filter(|&i| generators[i].get(e)))).collect();
        CohomologyBasis { signatures, rank }
    }

    /// Dimension of `H^1(M; Z/2)`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn signature(&self, edge: usize) -> &BitVec {
        &self.signatures[edge]
    }

    /// XOR of the signatures of the edges of a 1-chain, read mod 2.
    pub fn holonomy(&self, chain: &Chain) -> BitVec {
        let mut h = BitVec::zeros(self.rank);
        for (e, c) in chain.iter() {
            if c.rem_euclid(2) == 1 {
                h.xor_assign(&self.signatures[e]);
            }
        }
        h
    }
}

/// Shortest homologically nontrivial edge cycle, or none when `H_1` vanishes.
#[derive(Debug, Clone)]
pub struct Systole {
    pub length: Option<Q>,
    pub witness: Option<Chain>,
    pub basepoint: Option<usize>,
    pub first_betti: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SystoleSummary {
    /// `None` stands for an infinite systole.
    pub sys: Option<ExactReal>,
    pub witness: Option<ChainJson>,
    pub first_betti: usize,
}

impl Systole {
    pub fn summary(&self) -> SystoleSummary {
        SystoleSummary {
            sys: self.length.as_ref().map(ExactReal::from),
            witness: self.witness.as_ref().map(Chain::to_json),
            first_betti: self.first_betti,
        }
    }
}

struct Tree {
    dist: Vec<Option<Q>>,
    parent_edge: Vec<Option<usize>>,
    holonomy: Vec<BitVec>,
}

fn shortest_path_tree(m: &ClosedManifoldComplex, basis: &CohomologyBasis, weights: &[Q], root: usize) -> Tree {
    let c = m.complex();
    let n = c.vertex_count();
    let mut dist: Vec<Option<Q>> = vec![None; n];
    let mut parent_edge = vec![None; n];
    let mut holonomy = vec![BitVec::zeros(basis.rank()); n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[root] = Some(Q::default());
    heap.push(Reverse((Q::default(), root)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &e in c.cofaces(0, u) {
            let verts = c.simplex(1, e).vertices();
            let v = if verts[0] == u { verts[1] } else { verts[0] };
            let nd = &d + &weights[e];
            if dist[v].as_ref().map_or(true, |old| nd < *old) {
                dist[v] = Some(nd.clone());
                parent_edge[v] = Some(e);
                let mut h = holonomy[u].clone();
                h.xor_assign(basis.signature(e));
                holonomy[v] = h;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    Tree { dist, parent_edge, holonomy }
}

fn tree_path(m: &ClosedManifoldComplex, tree: &Tree, mut v: usize, out: &mut Vec<usize>) {
    while let Some(e) = tree.parent_edge[v] {
        out.push(e);
        let verts = m.complex().simplex(1, e).vertices();
        v = if verts[0] == v { verts[1] } else { verts[0] };
    }
}

/// Systole of a closed surface, measured along edges.
///
/// For every basepoint a shortest-path tree is grown with cocycle holonomy
/// at each vertex; each non-tree edge closing a loop with nonzero holonomy
/// is a candidate. The minimum over all basepoints is the shortest
/// nontrivial cycle.
pub fn systole(m: &ClosedManifoldComplex) -> Result<Systole> {
    if m.dim() != 2 {
        return Err(Error::Precondition(format!("systole needs a surface, got dimension {}", m.dim())));
    }
    let basis = CohomologyBasis::new(m);
    if basis.rank() == 0 {
        return Ok(Systole { length: None, witness: None, basepoint: None, first_betti: 0 });
    }
    let c = m.complex();
    let weights = c.weights(1)?;
    let mut best: Option<(Q, usize, usize)> = None;
    for root in 0..c.vertex_count() {
        let tree = shortest_path_tree(m, &basis, weights, root);
        for (e, s) in c.simplices(1).iter().enumerate() {
            let (a, b) = (s.vertices()[0], s.vertices()[1]);
            if tree.parent_edge[a] == Some(e) || tree.parent_edge[b] == Some(e) {
                continue;
            }
            let (Some(da), Some(db)) = (&tree.dist[a], &tree.dist[b]) else { continue };
            let mut h = tree.holonomy[a].clone();
            h.xor_assign(&tree.holonomy[b]);
            h.xor_assign(basis.signature(e));
            if h.is_zero() {
                continue;
            }
            let len = da + db + &weights[e];
            if best.as_ref().map_or(true, |(l, _, _)| len < *l) {
                best = Some((len, root, e));
            }
        }
    }
    let (_, root, e) = best.ok_or_else(|| Error::Solver("no nontrivial loop found despite nonzero H1".into()))?;
    let tree = shortest_path_tree(m, &basis, weights, root);
    let s = c.simplex(1, e).vertices();
    let mut edges = vec![e];
    tree_path(m, &tree, s[0], &mut edges);
    tree_path(m, &tree, s[1], &mut edges);
    let witness = Chain::from_indices(c, 1, Some(2), edges.into_iter().map(|e| (e, 1)))?;
    if !witness.boundary()?.is_zero() || basis.holonomy(&witness).is_zero() {
        return Err(Error::Certificate("systole witness is not a nontrivial cycle".into()));
    }
    let length = mass_p(&witness, 2)?;
    Ok(Systole { length: Some(length), witness: Some(witness), basepoint: Some(root), first_betti: basis.rank() })
}
