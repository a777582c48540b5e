use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    /// Order or argument beyond the documented caps of the special functions.
    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("singular preconditioner on cylinder {cylinder}, mode {mode}: k^2 is (numerically) an interior Dirichlet eigenvalue")]
    SingularPreconditioner { cylinder: usize, mode: i32 },

    #[error("singular system matrix")]
    SingularMatrix,

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("point ({x}, {y}) lies inside cylinder {cylinder}")]
    InsideCylinder { x: f64, y: f64, cylinder: usize },

    #[error("point ({x}, {y}) is too close to the boundary of cylinder {cylinder} for quadrature")]
    TooCloseToBoundary { x: f64, y: f64, cylinder: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("insufficient points for fit: need {needed}, have {have}")]
    InsufficientPoints { needed: usize, have: usize },

    #[error("series did not converge: {0}")]
    NonConvergent(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
