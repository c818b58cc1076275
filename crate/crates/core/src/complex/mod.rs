//! Weighted simplicial complexes, chains over ℤ and ℤ/p, and simplicial maps.

mod chain;
mod map;
mod simplex;
pub mod volume;
mod weighted;

pub use chain::{reduce_coeff, Chain, ChainJson};
pub(crate) use chain::check_modulus;
pub use map::SimplicialMap;
pub use simplex::Simplex;
pub use weighted::{ComplexBuilder, WeightedComplex};
