//! Symplectic rank of bosonic pure states: exact computation, non-Gaussian
//! compression, approximate rank, symplectic fidelities, monotonicity
//! checks, and conversion-rate bounds.
//!
//! The symplectic rank counts the symplectic eigenvalues of a pure state's
//! covariance matrix that exceed the vacuum value 1. It is zero exactly on
//! Gaussian states, invariant under Gaussian unitaries, additive over tensor
//! products, and non-increasing under post-selected Gaussian operations —
//! making it a natural measure of how many modes of genuine non-Gaussianity
//! a state carries.
//!
//! The crate provides:
//!
//! * [`symplectic_rank_pure`] / [`symplectic_rank_from_moments`] /
//!   [`symplectic_rank_density`] — eigenvalue counting with a configurable
//!   threshold above the vacuum floor,
//! * [`compress`] — the constructive factorization
//!   `psi = G (core (x) vacuum)` with `G` Gaussian and the core supported on
//!   `rank` modes,
//! * [`symplectic_fidelity`] and [`fidelity_curve`] — best-found overlaps
//!   with the rank-`k` states via multi-start simplex search over Gaussian
//!   unitaries (sequential `_seq` siblings are always available; the
//!   `parallel` feature runs restarts concurrently with deterministic
//!   merging),
//! * [`approx_symplectic_rank`] and [`eigenvalue_witness`] — the
//!   fidelity-based approximate rank and its cheap eigenvalue upper bound,
//! * [`monotonicity_suite`] — a randomized harness asserting that Gaussian
//!   operations never increase the rank,
//! * [`conversion_bounds`] — closed-form rate bounds for Fock tensor
//!   products, certifying irreversibility of non-Gaussian conversion.

mod compress;
mod convert;
mod error;
mod fidelity;
mod monotone;
mod nelder;
mod rank;
mod util;

pub use compress::{compress, compress_with, CompressionOptions, CompressionResult};
pub use convert::{conversion_bounds, ConversionBounds, ConversionVerdict};
pub use error::RankError;
pub use fidelity::{
    approx_symplectic_rank, approx_symplectic_rank_seq, fidelity_curve, fidelity_curve_seq,
    symplectic_fidelity, symplectic_fidelity_seq, FidelityCurve, FidelityOutcome, FidelityPoint,
    OptimizerConfig, OptimizerDiagnostics,
};
pub use monotone::{
    monotonicity_suite, MonotonicityOptions, MonotonicityReport, MonotonicityStep,
};
pub use rank::{
    eigenvalue_witness, symplectic_rank_density, symplectic_rank_from_moments,
    symplectic_rank_pure, DEFAULT_RANK_TOL,
};
