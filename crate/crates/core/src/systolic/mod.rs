//! Fundamental classes of closed manifolds, surface systoles, and the
//! systolic inequality harness.

mod harness;
mod loewner;
mod manifold;
mod systole;

pub use harness::{verify_chain, FillMethod, HarnessParams, Ratios, SystoleReport, VerifyReport};
pub use loewner::{loewner_check, LoewnerCheck, LoewnerReport};
pub use manifold::{fundamental_class, ClosedManifoldComplex};
pub use systole::{systole, CohomologyBasis, Systole, SystoleSummary};
