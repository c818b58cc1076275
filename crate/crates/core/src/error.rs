use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no boundary in dimension 0")]
    ZeroDimensionalBoundary,

    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("map is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("simplex budget exceeded: {count} simplices > budget {budget}")]
    BudgetExceeded { count: usize, budget: usize },

    #[error("no admissible covering radius at vertex {vertex} (density factor too large)")]
    NoAdmissibleRadius { vertex: usize },

    #[error("no vanishing slice radius around vertex {center} in ({low}, {high}); refine the ambient complex")]
    NoVanishingSlice { center: usize, low: String, high: String },

    #[error("cone simplex missing from the ambient complex: {0:?}")]
    MissingConeSimplex(Vec<usize>),

    #[error("cycle not null-homologous mod {0} in ambient")]
    NotNullHomologous(i64),

    #[error("not a cycle mod {0}")]
    NotACycle(i64),

    #[error("not a closed pseudo-manifold: {0}")]
    NotClosedManifold(String),

    #[error("not a torus: {0}")]
    NotATorus(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate check failed: {0}")]
    Certificate(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("parse error at line {line}: {message}")]
    ParseAt { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
