use thiserror::Error;

use fock::FockError;
use gaussian::GaussianError;
use symplectic_core::SympError;

/// Errors produced by the rank, compression, and fidelity routines.
#[derive(Debug, Error)]
pub enum RankError {
    #[error(transparent)]
    Symplectic(#[from] SympError),

    #[error(transparent)]
    Gaussian(#[from] GaussianError),

    #[error(transparent)]
    Fock(#[from] FockError),

    /// The symplectic rank of a mixed state is a convex-roof quantity
    /// (minimal maximum rank over pure-state decompositions) with no known
    /// general algorithm; only pure states are accepted.
    #[error(
        "state is not pure (purity defect {purity_defect:.3e}): the mixed-state symplectic \
         rank is a convex-roof minimization over pure-state decompositions and is not computed"
    )]
    MixedStateUnsupported { purity_defect: f64 },

    /// Inverting the recovered Gaussian unitary left too much weight outside
    /// the `core (x) vacuum` sector. Usually the cutoff is too small for the
    /// squeezing content of the state, or the rank threshold misclassified a
    /// symplectic eigenvalue near the vacuum floor.
    #[error(
        "compression residual {residual:.3e} exceeds tau_comp = {tau_comp:.3e} \
         (recovered rank {rank}, accumulated leak {leak:.3e})"
    )]
    CompressionResidual {
        residual: f64,
        tau_comp: f64,
        rank: usize,
        leak: f64,
    },

    #[error("epsilon = {eps} is outside the valid range {range}")]
    InvalidEpsilon { eps: f64, range: &'static str },

    #[error("mode count k = {k} exceeds the number of modes {n_modes}")]
    InvalidK { k: usize, n_modes: usize },

    /// A randomized Gaussian-operation sequence increased the rank. This is
    /// never expected; it indicates a numerical tolerance failure or a bug.
    #[error(
        "rank increased from {rank_before} to {rank_after} at step {step_index} ({description}); \
         sequence so far: {trail:?}"
    )]
    MonotonicityViolation {
        step_index: usize,
        description: String,
        rank_before: usize,
        rank_after: usize,
        trail: Vec<String>,
    },

    /// A partial trace was requested on a mode that is no longer in product
    /// form with the rest of the state.
    #[error("cannot take a pure partial trace: {detail}")]
    ProductExtraction { detail: String },

    #[error("conversion spec invalid: {detail}")]
    InvalidConversionSpec { detail: String },

    /// The optimizer could not evaluate its objective anywhere (every probe
    /// exceeded the leak budget or failed structurally).
    #[error("fidelity objective could not be evaluated: {detail}")]
    ObjectiveUnavailable { detail: String },
}
