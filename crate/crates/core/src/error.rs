use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh parameter: {0}")]
    InvalidMesh(String),

    #[error("polynomial degree {0} is not supported (expected 1..=10)")]
    UnsupportedDegree(usize),

    #[error("element {element} is degenerate (signed area {area:e})")]
    DegenerateElement { element: usize, area: f64 },

    #[error("face {0} is not an interior face")]
    NotInteriorFace(usize),

    #[error("face {0} is not a Dirichlet boundary face")]
    NotDirichletFace(usize),

    #[error("switch rule violated on element {element}: {sum} switches set")]
    SwitchRule { element: usize, sum: usize },

    #[error("mesh has no interior faces")]
    NoInteriorFaces,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("factorization failed at pivot {pivot} (value {value:e})")]
    Factorization { pivot: usize, value: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations (last estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },

    #[error("memory formula defined for d in 1..=3 and p >= 1, got d={d}, p={p}")]
    InvalidMemoryQuery { d: usize, p: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
