use thiserror::Error;

/// Failure modes shared by every layer of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A denominator vanished (q-Pochhammer pole or a zero of a divisor).
    #[error("pole: {0}")]
    Pole(String),
    /// The requested series does not converge for the given argument.
    #[error("divergent series: {0}")]
    Divergence(String),
    /// A computed quantity violates an invariant that should hold exactly.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// Gauss-Legendre order doubling hit the maximum order before the tolerance.
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    /// A truncated sum or grid reached its hard cap before the tolerance.
    #[error("truncation cap reached: {0}")]
    Truncation(String),
    /// Problem size beyond what the exact oracle supports.
    #[error("size limit exceeded: {0}")]
    Size(String),
}

pub type Result<T> = std::result::Result<T, Error>;
