use alloc::string::String;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("non-finite input: {0}")]
    Numeric(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no convergence after {iterations} iterations: {detail}")]
    NonConvergence { iterations: usize, detail: String },
    #[error("ambiguous spectral gap: {0}")]
    Ambiguity(String),
    #[error("degenerate bilinear form: {0}")]
    Degenerate(String),
    #[error("line search failed: {0}")]
    LineSearch(String),
    #[error("integrator failure: {0}")]
    Integrator(String),
}

pub type Result<T> = core::result::Result<T, Error>;
