use thiserror::Error;

/// Errors raised by the Gaussian moments layer.
#[derive(Debug, Error)]
pub enum GaussianError {
    #[error(transparent)]
    Symplectic(#[from] symplectic_core::SympError),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("covariance violates the uncertainty relation: V + i Omega has eigenvalue {min_eig:.3e}")]
    UncertaintyViolated { min_eig: f64 },

    #[error("state is not pure: largest symplectic eigenvalue exceeds one by {excess:.3e} (tolerance {tol:.3e})")]
    NotPure { excess: f64, tol: f64 },

    #[error("block size k = {k} out of range for {n} modes (need 1 <= k <= n/2)")]
    InvalidBlockSize { k: usize, n: usize },

    #[error("mode index {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("mode subsets must be disjoint, non-empty and within range: {detail}")]
    InvalidModeSet { detail: String },

    #[error("expected a passive residual factor, but {detail}")]
    NotPassive { detail: String },

    #[error("disentangling requires an even number of modes per party, got m = {m}")]
    OddPartySize { m: usize },

    #[error("decomposition consistency check failed: {detail}")]
    Inconsistent { detail: String },
}
