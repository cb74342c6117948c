use thiserror::Error;

/// Errors raised by the symplectic toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not symmetric (relative asymmetry {0:.3e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite (smallest eigenvalue {0:.6e})")]
    NotPositiveDefinite(f64),

    #[error("matrix is not symplectic (residual {0:.3e})")]
    NotSymplectic(f64),

    #[error("degenerate symplectic pairing ({0:.3e})")]
    DegeneratePairing(f64),

    #[error("not a symplectic basis: {0}")]
    InvalidBasis(String),

    #[error("degenerate subspace: |det(V^T Omega V)| = {0:.3e}")]
    DegenerateSubspace(f64),

    #[error("Williamson reduction did not converge (residual {residual:.3e}, limit {limit:.3e})")]
    ConvergenceFailure { residual: f64, limit: f64 },

    #[error("{count} principal minors exceed the enumeration limit {limit}")]
    CombinatorialBlowup { count: u128, limit: u128 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
