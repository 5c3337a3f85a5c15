use alloc::string::String;

/// Failures raised by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A numerical routine did not reach its tolerance inside its budget.
    #[error("{operation} did not converge: {detail}")]
    Convergence {
        operation: &'static str,
        detail: String,
    },
    /// A LePage truncation whose deterministic tail bound exceeds the tolerance.
    #[error(
        "series tail bound {bound:.3e} exceeds tolerance {tol:.3e} at K = {terms}; \
         need K >= {required_terms}"
    )]
    Truncation {
        terms: usize,
        bound: f64,
        tol: f64,
        required_terms: usize,
    },
    /// Characteristic-function fit with no usable signal.
    #[error("degenerate fit: {0}")]
    Underflow(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
