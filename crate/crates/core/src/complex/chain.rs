use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Simplex, WeightedComplex};
use crate::error::{Error, Result};

/// Representative of `c mod p` with smallest absolute value.
///
/// For even `p` the tie at `p/2` resolves to `+p/2`.
pub fn reduce_coeff(c: i64, p: i64) -> i64 {
    let r = c.rem_euclid(p);
    if 2 * r > p {
        r - p
    } else {
        r
    }
}

pub(crate) fn check_modulus(p: i64) -> Result<()> {
    if p < 2 {
        return Err(Error::BadModulus(p));
    }
    Ok(())
}

/// Sparse chain of one dimension on a weighted complex.
///
/// Coefficients are keyed by simplex index. With `modulus = Some(p)` every
/// stored coefficient is the reduced representative, so `|c| <= p/2`.
#[derive(Clone)]
pub struct Chain {
    complex: Arc<WeightedComplex>,
    dim: usize,
    modulus: Option<i64>,
    coeffs: BTreeMap<usize, i64>,
}

impl PartialEq for Chain {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.complex, &other.complex)
            && self.dim == other.dim
            && self.modulus == other.modulus
            && self.coeffs == other.coeffs
    }
}

impl Eq for Chain {}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain(dim={}, mod={:?}, ", self.dim, self.modulus)?;
        f.debug_map().entries(self.coeffs.iter().map(|(&i, c)| (self.complex.simplex(self.dim, i), c))).finish()?;
        write!(f, ")")
    }
}

impl Chain {
    pub fn zero(complex: &Arc<WeightedComplex>, dim: usize, modulus: Option<i64>) -> Chain {
        Chain { complex: complex.clone(), dim, modulus, coeffs: BTreeMap::new() }
    }

    /// Chain from `(simplex index, coefficient)` pairs; repeated indices accumulate.
    pub fn from_indices<I>(complex: &Arc<WeightedComplex>, dim: usize, modulus: Option<i64>, terms: I) -> Result<Chain>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        if let Some(p) = modulus {
            check_modulus(p)?;
        }
        let mut chain = Chain::zero(complex, dim, modulus);
        let count = complex.count(dim);
        for (i, c) in terms {
            if i >= count {
                return Err(Error::InvalidChain(format!("simplex index {i} out of range in dimension {dim}")));
            }
            chain.add_at(i, c);
        }
        Ok(chain)
    }

    /// Chain from ordered vertex tuples; the tuple order fixes the orientation.
    pub fn from_terms<V>(complex: &Arc<WeightedComplex>, dim: usize, modulus: Option<i64>, terms: &[(V, i64)]) -> Result<Chain>
    where
        V: AsRef<[usize]>,
    {
        let mut idx = Vec::with_capacity(terms.len());
        for (verts, c) in terms {
            let verts = verts.as_ref();
            if verts.len() != dim + 1 {
                return Err(Error::InvalidChain(format!("tuple {verts:?} does not have dimension {dim}")));
            }
            let (s, sign) = Simplex::oriented(verts)
                .ok_or_else(|| Error::InvalidChain(format!("degenerate simplex {verts:?}")))?;
            let i = complex
                .index_of(&s)
                .ok_or_else(|| Error::InvalidChain(format!("simplex {verts:?} not in complex")))?;
            idx.push((i, sign * c));
        }
        Chain::from_indices(complex, dim, modulus, idx)
    }

    /// The elementary chain `1·[v0, ..., vk]` with the given orientation.
    pub fn simplex(complex: &Arc<WeightedComplex>, vertices: &[usize]) -> Result<Chain> {
        if vertices.is_empty() {
            return Err(Error::InvalidChain("empty simplex".into()));
        }
        Chain::from_terms(complex, vertices.len() - 1, None, &[(vertices, 1)])
    }

    fn add_at(&mut self, i: usize, c: i64) {
        let entry = self.coeffs.entry(i).or_insert(0);
        *entry += c;
        if let Some(p) = self.modulus {
            *entry = reduce_coeff(*entry, p);
        }
        if *entry == 0 {
            self.coeffs.remove(&i);
        }
    }

    pub fn complex(&self) -> &Arc<WeightedComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modulus(&self) -> Option<i64> {
        self.modulus
    }

    pub fn coeff(&self, idx: usize) -> i64 {
        self.coeffs.get(&idx).copied().unwrap_or(0)
    }

    /// Nonzero `(simplex index, coefficient)` pairs in index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.coeffs.iter().map(|(&i, &c)| (i, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    /// Sorted vertex set touched by the support.
    pub fn support_vertices(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .coeffs
            .keys()
            .flat_map(|&i| self.complex.simplex(self.dim, i).vertices().iter().copied())
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn terms(&self) -> Vec<(Simplex, i64)> {
        self.iter().map(|(i, c)| (self.complex.simplex(self.dim, i).clone(), c)).collect()
    }

    pub fn max_abs_coeff(&self) -> i64 {
        self.coeffs.values().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn boundary(&self) -> Result<Chain> {
        if self.dim == 0 {
            return Err(Error::ZeroDimensionalBoundary);
        }
        let mut out = Chain::zero(&self.complex, self.dim - 1, self.modulus);
        for (i, c) in self.iter() {
            for (j, &f) in self.complex.faces(self.dim, i).iter().enumerate() {
                out.add_at(f, if j % 2 == 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    /// Coefficient-wise reduction into the residue classes mod `p`.
    pub fn reduce_mod_p(&self, p: i64) -> Result<Chain> {
        check_modulus(p)?;
        Chain::from_indices(&self.complex, self.dim, Some(p), self.iter())
    }

    /// Forgets the modulus, keeping the stored representatives as integers.
    pub fn lift(&self) -> Chain {
        Chain { modulus: None, ..self.clone() }
    }

    fn check_compatible(&self, other: &Chain) -> Result<()> {
        if !Arc::ptr_eq(&self.complex, &other.complex) {
            return Err(Error::InvalidChain("chains live on different complexes".into()));
        }
        if self.dim != other.dim {
            return Err(Error::InvalidChain(format!("dimension mismatch {} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    /// Sum; the result is reduced mod `p` if either operand carries a modulus.
    pub fn add(&self, other: &Chain) -> Result<Chain> {
        self.check_compatible(other)?;
        let modulus = match (self.modulus, other.modulus) {
            (Some(a), Some(b)) if a != b => {
                return Err(Error::InvalidChain(format!("modulus mismatch {a} vs {b}")));
            }
            (a, b) => a.or(b),
        };
        let mut out = Chain { modulus, ..self.clone() };
        if let Some(p) = modulus {
            if self.modulus.is_none() {
                out = self.reduce_mod_p(p)?;
            }
        }
        for (i, c) in other.iter() {
            out.add_at(i, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Chain {
        self.scale(-1)
    }

    pub fn scale(&self, n: i64) -> Chain {
        let mut out = Chain::zero(&self.complex, self.dim, self.modulus);
        for (i, c) in self.iter() {
            out.add_at(i, n * c);
        }
        out
    }

    /// Keeps only the simplices for which `keep(index)` holds.
    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> Chain {
        Chain { coeffs: self.coeffs.iter().filter(|(&i, _)| keep(i)).map(|(&i, &c)| (i, c)).collect(), ..self.clone() }
    }

    /// Whether `self ≡ other` coefficient-wise mod `p`.
    pub fn congruent(&self, other: &Chain, p: i64) -> Result<bool> {
        Ok(self.lift().sub(&other.lift())?.reduce_mod_p(p)?.is_zero())
    }

    /// Moves the chain onto another complex containing all of its simplices.
    pub fn transfer(&self, target: &Arc<WeightedComplex>) -> Result<Chain> {
        let mut terms = Vec::with_capacity(self.len());
        for (s, c) in self.terms() {
            let i = target
                .index_of(&s)
                .ok_or_else(|| Error::InvalidChain(format!("simplex {s:?} missing from target complex")))?;
            terms.push((i, c));
        }
        Chain::from_indices(target, self.dim, self.modulus, terms)
    }

    pub fn to_json(&self) -> ChainJson {
        ChainJson {
            dim: self.dim,
            modulus: self.modulus,
            coeffs: self.terms().into_iter().map(|(s, c)| (s.vertices().to_vec(), c)).collect(),
        }
    }

    pub fn from_json(complex: &Arc<WeightedComplex>, json: &ChainJson) -> Result<Chain> {
        Chain::from_terms(complex, json.dim, json.modulus, &json.coeffs)
    }
}

/// Serialized chain: `{"dim": k, "modulus": p|null, "coeffs": [[tuple, c], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainJson {
    pub dim: usize,
    pub modulus: Option<i64>,
    pub coeffs: Vec<(Vec<usize>, i64)>,
}
