//! Linear algebra over GF(2) on bit-packed vectors.

use std::fmt;

use crate::number::Q;

/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec{:?}", self.ones().collect::<Vec<_>>())
    }
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_ones(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        if self.get(i) != bit {
            self.flip(i);
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    /// Grows the vector with zero bits.
    pub fn resize(&mut self, len: usize) {
        assert!(len >= self.len);
        self.len = len;
        self.words.resize(len.div_ceil(64), 0);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        if other.words.len() > self.words.len() {
            self.resize(other.len);
        }
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().position(|&w| w != 0).map(|i| i * 64 + self.words[i].trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }

    /// Whether every set bit of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        self.words.iter().enumerate().all(|(i, &w)| w & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    /// Sum of `weights[i]` over the set bits.
    pub fn weight(&self, weights: &[Q]) -> Q {
        self.ones().map(|i| &weights[i]).sum()
    }
}

/// Column-reduced basis with distinct lowest set bits.
///
/// Columns are inserted one at a time; each insertion either adds a pivot or
/// shows the column depends on earlier ones. With tracking enabled, every
/// stored vector remembers which inserted columns sum to it.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    rows: usize,
    pivot_of: Vec<Option<usize>>,
    vecs: Vec<BitVec>,
    combos: Option<Vec<BitVec>>,
    inserted: usize,
}

impl EchelonBasis {
    pub fn new(rows: usize, track: bool) -> Self {
        EchelonBasis { rows, pivot_of: vec![None; rows], vecs: Vec::new(), combos: track.then(Vec::new), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.vecs.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the basis, returning the residual and, when
    /// tracking, the combination of inserted columns that was subtracted.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, Option<BitVec>) {
        let mut v = v.clone();
        let mut combo = self.combos.as_ref().map(|_| BitVec::zeros(self.inserted));
        while let Some(low) = v.first_one() {
            let Some(p) = self.pivot_of[low] else { break };
            v.xor_assign(&self.vecs[p]);
            if let (Some(c), Some(cs)) = (combo.as_mut(), self.combos.as_ref()) {
                c.xor_assign(&cs[p]);
            }
        }
        (v, combo)
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts the next column. Returns the dependency (as a combination of
    /// inserted columns including this one) when the column is dependent and
    /// tracking is on; `None` otherwise.
    pub fn insert(&mut self, v: &BitVec) -> Option<BitVec> {
        assert_eq!(v.len(), self.rows);
        let id = self.inserted;
        self.inserted += 1;
        let (res, combo) = self.reduce(v);
        let combo = combo.map(|mut c| {
            c.resize(self.inserted);
            c.flip(id);
            c
        });
        match res.first_one() {
            Some(low) => {
                self.pivot_of[low] = Some(self.vecs.len());
                self.vecs.push(res);
                if let (Some(cs), Some(c)) = (self.combos.as_mut(), combo) {
                    cs.push(c);
                }
                None
            }
            None => combo,
        }
    }

    /// Combination of inserted columns summing to `target`, if one exists.
    pub fn solve(&self, target: &BitVec) -> Option<BitVec> {
        let (res, combo) = self.reduce(target);
        if !res.is_zero() {
            return None;
        }
        combo.or_else(|| Some(BitVec::zeros(self.inserted)))
    }
}

/// Solution and null-space basis of `A x = b`, with `A` given by columns.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub particular: Option<BitVec>,
    pub null_basis: Vec<BitVec>,
}

pub fn solve_system(columns: &[BitVec], rows: usize, target: &BitVec) -> LinearSystem {
    let mut basis = EchelonBasis::new(rows, true);
    let mut null_basis = Vec::new();
    for c in columns {
        if let Some(dep) = basis.insert(c) {
            null_basis.push(dep);
        }
    }
    let n = columns.len();
    let fit = |mut v: BitVec| {
        v.resize(n);
        v
    };
    LinearSystem { particular: basis.solve(target).map(fit), null_basis: null_basis.into_iter().map(fit).collect() }
}

/// Result of a minimum-weight search over a solution coset.
#[derive(Debug, Clone)]
pub struct MinWeight {
    pub x: BitVec,
    pub weight: Q,
    /// `false` when the node budget ran out before the search completed.
    pub exact: bool,
    pub nodes: usize,
}

/// Minimizes `Σ weights[i]·x_i` over `x = x0 + span(null_basis)`.
///
/// The basis is brought to reduced echelon form so every generator owns a
/// private coordinate; a depth-first search then fixes generators one at a
/// time and prunes with the weight of coordinates no later generator touches.
pub fn min_weight_solution(x0: &BitVec, null_basis: &[BitVec], weights: &[Q], node_limit: usize) -> MinWeight {
    let n = x0.len();
    let gens = rref(null_basis, n);
    let d = gens.len();
    let mut free_after = vec![BitVec::zeros(n); d + 1];
    for i in (0..d).rev() {
        let mut f = free_after[i + 1].clone();
        for j in gens[i].ones() {
            f.set(j, true);
        }
        free_after[i] = f;
    }

    let mut best = greedy_descent(x0, &gens, weights);
    let mut best_w = best.weight(weights);
    let mut nodes = 0usize;
    let mut exact = true;
    let mut stack: Vec<(usize, BitVec)> = vec![(0, x0.clone())];
    while let Some((level, x)) = stack.pop() {
        nodes += 1;
        if nodes > node_limit {
            exact = false;
            break;
        }
        let fixed: Q = x.ones().filter(|&i| !free_after[level].get(i)).map(|i| &weights[i]).sum();
        if fixed >= best_w {
            continue;
        }
        if level == d {
            best_w = fixed;
            best = x;
            continue;
        }
        let mut flipped = x.clone();
        flipped.xor_assign(&gens[level]);
        stack.push((level + 1, flipped));
        stack.push((level + 1, x));
    }
    MinWeight { x: best, weight: best_w, exact, nodes }
}

fn greedy_descent(x0: &BitVec, gens: &[BitVec], weights: &[Q]) -> BitVec {
    let mut x = x0.clone();
    let mut w = x.weight(weights);
    loop {
        let mut improved = false;
        for g in gens {
            let mut y = x.clone();
            y.xor_assign(g);
            let wy = y.weight(weights);
            if wy < w {
                x = y;
                w = wy;
                improved = true;
            }
        }
        if !improved {
            return x;
        }
    }
}

/// Reduced row echelon form of a set of vectors (zero rows dropped).
pub fn rref(vectors: &[BitVec], len: usize) -> Vec<BitVec> {
    let mut rows: Vec<BitVec> = vectors.to_vec();
    let mut out: Vec<BitVec> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut r in rows.drain(..) {
        for (p, b) in pivots.iter().zip(&out) {
            if r.get(*p) {
                r.xor_assign(b);
            }
        }
        if let Some(p) = r.first_one() {
            for b in out.iter_mut() {
                if b.get(p) {
                    b.xor_assign(&r);
                }
            }
            pivots.push(p);
            out.push(r);
        }
    }
    debug_assert!(out.iter().all(|v| v.len() == len));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::q_int;

    #[test]
    fn bit_ops() {
        let mut v = BitVec::zeros(130);
        v.flip(3);
        v.flip(129);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 129]);
        assert_eq!(v.first_one(), Some(3));
        assert_eq!(v.count_ones(), 2);
        let w = v.clone();
        v.xor_assign(&w);
        assert!(v.is_zero());
    }

    #[test]
    fn solve_and_nullspace() {
        // columns of the boundary of a square with a diagonal: edges 01,12,23,03,02
        let cols = [vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![0, 2]];
        let columns: Vec<BitVec> = cols.iter().map(|c| BitVec::from_ones(4, c.iter().copied())).collect();
        let sys = solve_system(&columns, 4, &BitVec::from_ones(4, [0, 2]));
        let x = sys.particular.unwrap();
        let mut acc = BitVec::zeros(4);
        for j in x.ones() {
            acc.xor_assign(&columns[j]);
        }
        assert_eq!(acc, BitVec::from_ones(4, [0, 2]));
        assert_eq!(sys.null_basis.len(), 2);
        let weights = vec![q_int(1); 5];
        let best = min_weight_solution(&x, &sys.null_basis, &weights, 1000);
        assert_eq!(best.weight, q_int(1));
        assert!(best.exact);
        assert!(solve_system(&columns, 4, &BitVec::from_ones(4, [0])).particular.is_none());
    }
}
