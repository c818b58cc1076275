//! Simplex volumes from pairwise squared distances (Cayley–Menger).

use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::number::{q_int, q_pow, q_sqrt, Q};

/// Determinant of a square rational matrix by fraction-exact elimination.
pub fn determinant(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

fn factorial(k: usize) -> Q {
    (1..=k as i64).fold(Q::one(), |acc, i| acc * q_int(i))
}

/// Squared k-volume of the simplex with the given squared edge lengths.
///
/// `sq[i][j]` is the squared distance between vertices `i` and `j`. A
/// non-positive result means the lengths are not realizable in Euclidean
/// space (or the simplex is degenerate).
pub fn cayley_menger_squared_volume(sq: &[Vec<Q>]) -> Q {
    let n = sq.len();
    if n <= 1 {
        return Q::one();
    }
    let k = n - 1;
    let size = n + 1;
    let mut cm = vec![vec![Q::zero(); size]; size];
    for i in 1..size {
        cm[0][i] = Q::one();
        cm[i][0] = Q::one();
    }
    for i in 0..n {
        for j in 0..n {
            cm[i + 1][j + 1] = sq[i][j].clone();
        }
    }
    let det = determinant(cm);
    let two_k = q_pow(&q_int(2), k as u32);
    let kf = factorial(k);
    let denom = two_k * &kf * &kf;
    let signed = if (k + 1) % 2 == 0 { det } else { -det };
    signed / denom
}

/// Volume from Cayley–Menger, or `None` when it is not strictly positive.
pub fn cayley_menger_volume(sq: &[Vec<Q>]) -> Result<Option<Q>> {
    let v2 = cayley_menger_squared_volume(sq);
    if !v2.is_positive() {
        return Ok(None);
    }
    Ok(Some(q_sqrt(&v2)?))
}

/// Upper-bound weight `diam^k / k!` used for non-Euclidean metric simplices.
pub fn diameter_weight(sq: &[Vec<Q>]) -> Result<Q> {
    let k = sq.len().saturating_sub(1);
    let max_sq = sq.iter().flatten().max().cloned().unwrap_or_else(Q::zero);
    let diam = q_sqrt(&max_sq)?;
    Ok(q_pow(&diam, k as u32) / factorial(k))
}
