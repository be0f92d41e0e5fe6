//! Gaussian states and unitaries at the level of first and second moments.
//!
//! Conventions follow the `symplectic-core` crate: interleaved quadratures
//! `(x_1, p_1, ..., x_n, p_n)`, `hbar = 1`, vacuum covariance equal to the
//! identity. A Gaussian unitary is represented by the real descriptor
//! [`GaussianUnitaryDesc`] `(S, r)` acting on moments as `m -> S m + r`,
//! `V -> S V S^T`; the complex-notation factorization
//! `G = G_U S(xi) D(beta) G_V` is available as [`GaussianParams`], and the
//! two views round-trip through [`desc_to_params`] / [`params_to_desc`].
//!
//! On top of the moment actions the crate provides:
//!
//! * [`normal_mode_decomposition`] — thermal normal form of a (possibly
//!   mixed) Gaussian state,
//! * [`stellar_of_gaussian`] — the Gaussian-exponential stellar function of
//!   a pure Gaussian state,
//! * [`block_decompose`] — the factorization
//!   `G = (1_k (x) G_tail)(G_core (x) 1) G_p` with passive `G_p`,
//! * [`disentangle_unitary`] — the `(3m/2)`-mode unitary that disentangles a
//!   bipartite `m + m`-mode Gaussian state,
//! * energy/photon bookkeeping, heterodyne conditioning, and a moment-level
//!   logarithmic negativity used as an entanglement diagnostic.

mod block;
mod error;
mod ops;
mod params;
mod stellar;
mod types;

pub use block::{block_decompose, disentangle_unitary, BlockDecomposition};
pub use error::GaussianError;
pub use ops::{
    apply_to_moments, energy_and_photon, log_negativity, normal_mode_decomposition, pure_fidelity,
    purity_defect, EnergyPhoton, NormalModes,
};
pub use params::{
    beta_from_displacement, desc_to_params, displacement_from_beta, params_to_desc, GaussianParams,
};
pub use stellar::{stellar_of_desc, stellar_of_gaussian, stellar_of_pure_moments, StellarGaussian};
pub use types::{GaussianMoments, GaussianUnitaryDesc};
