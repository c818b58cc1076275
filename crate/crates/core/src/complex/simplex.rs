use std::fmt;

/// An oriented simplex stored by its strictly increasing vertex list.
///
/// The canonical orientation is the sorted order; any other ordering of the
/// same vertices differs from it by the sign of the sorting permutation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Builds a simplex from vertices that are already strictly increasing.
    pub fn from_sorted(vertices: Vec<usize>) -> Option<Simplex> {
        if vertices.is_empty() || vertices.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        Some(Simplex(vertices))
    }

    /// Sorts an ordered vertex tuple into canonical form.
    ///
    /// Returns the simplex together with the permutation sign, or `None` when
    /// a vertex repeats (degenerate simplex).
    pub fn oriented(vertices: &[usize]) -> Option<(Simplex, i64)> {
        if vertices.is_empty() {
            return None;
        }
        let mut v = vertices.to_vec();
        let mut sign = 1i64;
        // insertion sort keeps the transposition count
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Simplex(v), sign))
    }

    pub fn vertex(v: usize) -> Simplex {
        Simplex(vec![v])
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// Codimension-one faces with their incidence signs, face `j` omits vertex `j`.
    pub fn boundary_faces(&self) -> Vec<(Simplex, i64)> {
        if self.0.len() < 2 {
            return Vec::new();
        }
        (0..self.0.len())
            .map(|j| {
                let mut f = self.0.clone();
                f.remove(j);
                (Simplex(f), if j % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    }

    /// Every nonempty face, including the simplex itself.
    pub fn all_faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1u64 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect()))
            .collect()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_sign() {
        let (s, sign) = Simplex::oriented(&[2, 0, 1]).unwrap();
        assert_eq!(s.vertices(), &[0, 1, 2]);
        assert_eq!(sign, 1);
        let (_, sign) = Simplex::oriented(&[1, 0, 2]).unwrap();
        assert_eq!(sign, -1);
        assert!(Simplex::oriented(&[1, 1]).is_none());
    }

    #[test]
    fn faces_of_triangle() {
        let s = Simplex::from_sorted(vec![0, 1, 2]).unwrap();
        let faces = s.boundary_faces();
        assert_eq!(faces[0], (Simplex(vec![1, 2]), 1));
        assert_eq!(faces[1], (Simplex(vec![0, 2]), -1));
        assert_eq!(faces[2], (Simplex(vec![0, 1]), 1));
        assert_eq!(s.all_faces().len(), 7);
    }
}
