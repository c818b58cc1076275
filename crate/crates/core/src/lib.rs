//! Chains mod p on weighted simplicial complexes.

pub mod complex;
pub mod corpus;
pub mod ekeland;
pub mod error;
pub mod filling;
pub mod flatnorm;
pub mod io;
pub mod gf2;
pub mod metric;
pub mod number;
pub mod optimize;
pub mod slicing;
pub mod systolic;

pub use complex::{Chain, Simplex, SimplicialMap, WeightedComplex};
pub use error::{Error, Result};
pub use number::Q;

// The guide's code blocks run as doc-tests, one module per chapter.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/flat-norm.md")]
    mod flat_norm {}
    #[doc = include_str!("../../../book/src/slicing.md")]
    mod slicing {}
    #[doc = include_str!("../../../book/src/metric.md")]
    mod metric {}
    #[doc = include_str!("../../../book/src/filling.md")]
    mod filling {}
    #[doc = include_str!("../../../book/src/systoles.md")]
    mod systoles {}
    #[doc = include_str!("../../../book/src/ekeland.md")]
    mod ekeland {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
