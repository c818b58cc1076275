//! Ball coverings, cycle decomposition, cone and isoperimetric fillings,
//! and exact filling radius and filling volume.

mod certificate;
mod cone;
mod cover;
mod decompose;
mod radius;
mod volume;

pub use certificate::{ambient_metric, support_distance, CertificateReport, FillingCertificate};
pub use cone::{cone_fill, ConeFill, CONE_CONSTANT};
pub use cover::{cover_balls, default_density, BallCover, BallReport};
pub use decompose::{decompose_cycle, Decomposition, DecompositionReport, Piece, Round, MAX_ROUNDS};
pub use radius::{filling_radius, simplex_radius, FillingRadius, RadiusStep};
pub use volume::{
    exact_fill_gf2, filling_volume, isoperimetric_fill, isoperimetric_fill_with, FillMode, IsoperimetricFill,
    DEFAULT_FILL_NODE_LIMIT,
};
