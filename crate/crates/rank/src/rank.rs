//! Exact symplectic rank of pure states and the eigenvalue witness for the
//! approximate rank.

use fock::{DensityOp, FockState};
use gaussian::GaussianMoments;
use symplectic_core::{symplectic_eigenvalues, Tolerances};

use crate::error::RankError;

/// Default excess over the vacuum eigenvalue below which a symplectic
/// eigenvalue is treated as exactly one. Separates genuine non-Gaussian
/// excess from Williamson round-off at desk-scale cutoffs.
pub const DEFAULT_RANK_TOL: f64 = 1e-6;

/// Maximum purity defect `1 - Tr[rho^2]` accepted when a density operator is
/// passed to a pure-state-only routine.
const PURITY_SLACK: f64 = 1e-8;

/// Counts the symplectic eigenvalues of `moments` exceeding `1 + tau_rank`.
///
/// This equals the symplectic rank when the moments belong to a **pure**
/// state; purity cannot be checked at the moment level (for a pure
/// non-Gaussian state the covariance matrix alone looks like that of a mixed
/// Gaussian state), so the caller owns that precondition.
pub fn symplectic_rank_from_moments(
    moments: &GaussianMoments,
    tau_rank: f64,
    tol: &Tolerances,
) -> Result<usize, RankError> {
    let d = symplectic_eigenvalues(moments.covariance(), tol)?;
    Ok(d.iter().filter(|&&di| di > 1.0 + tau_rank).count())
}

/// Symplectic rank of a pure state: the number of symplectic eigenvalues of
/// its covariance matrix exceeding `1 + tau_rank`.
///
/// The vacuum and every pure Gaussian state have rank 0; `|n>` has rank 1
/// for `n >= 1`; the rank is additive over tensor factors and invariant
/// under Gaussian unitaries.
pub fn symplectic_rank_pure(st: &FockState, tau_rank: f64) -> Result<usize, RankError> {
    let moments = fock::moments(st)?;
    symplectic_rank_from_moments(&moments, tau_rank, &Tolerances::default())
}

/// Symplectic rank of a density operator that is pure up to numerical noise.
///
/// Mixed inputs are rejected: for mixed states the symplectic rank is
/// defined by a convex-roof minimization over pure-state decompositions,
/// which has no implemented algorithm.
pub fn symplectic_rank_density(rho: &DensityOp, tau_rank: f64) -> Result<usize, RankError> {
    let defect = 1.0 - rho.purity() / rho.trace().powi(2);
    if defect > PURITY_SLACK {
        return Err(RankError::MixedStateUnsupported {
            purity_defect: defect,
        });
    }
    let moments = rho.moments()?;
    symplectic_rank_from_moments(&moments, tau_rank, &Tolerances::default())
}

/// Eigenvalue witness for the `eps`-approximate symplectic rank: the number
/// `t` of symplectic eigenvalues exceeding `1 + 2 eps / n`.
///
/// The approximate rank at level `eps` is guaranteed to be at most `t`:
/// rotating the state into normal form and projecting the `n - t`
/// near-vacuum modes onto the vacuum discards squared weight at most
/// `(n - t)/2 * max_excess <= eps`, so a rank-`t` state within fidelity
/// `1 - eps` always exists.
pub fn eigenvalue_witness(st: &FockState, eps: f64) -> Result<usize, RankError> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(RankError::InvalidEpsilon {
            eps,
            range: "[0, 1]",
        });
    }
    let threshold = 2.0 * eps / st.n_modes() as f64;
    symplectic_rank_pure(st, threshold)
}
