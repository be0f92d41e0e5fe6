//! Error type for the truncated Fock-space backend.

use gaussian::GaussianError;
use symplectic_core::SympError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FockError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("total photon number {total} exceeds the cutoff {cutoff}")]
    CutoffExceeded { total: usize, cutoff: usize },

    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("{gate} gate lost {leak:.3e} of the norm to truncation (budget {budget:.3e})")]
    LeakBudgetExceeded {
        gate: String,
        leak: f64,
        budget: f64,
    },

    #[error("invalid gate: {detail}")]
    InvalidGate { detail: String },

    #[error("state has numerically zero norm")]
    ZeroNormState,

    #[error("invalid mixture: {detail}")]
    InvalidMixture { detail: String },

    #[error(transparent)]
    Gaussian(#[from] GaussianError),

    #[error(transparent)]
    Symplectic(#[from] SympError),
}
