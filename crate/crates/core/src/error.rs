use thiserror::Error;

/// Errors produced by the library layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} vertices")]
    DimensionMismatch { left: usize, right: usize },

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    /// The exact feasibility system for a losing density had no solution.
    /// Oriented inputs always admit one, so this signals a solver defect.
    #[error("density-not-found: losing density system infeasible on {n} vertices")]
    DensityNotFound { n: usize },

    /// No vertex satisfied the union inequality on a tournament pair.
    #[error("theorem-violated: {0}")]
    TheoremViolated(Box<crate::theorem::Violation>),

    /// A runtime consistency check failed.
    #[error("internal check failed: {0}")]
    Internal(String),

    #[error("unknown fixture {0} (expected 1 or 2)")]
    UnknownFixture(u8),

    #[error("exhaustive enumeration bound exceeded: n = {n} > {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("document error at {location}: {message}")]
    Document { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
