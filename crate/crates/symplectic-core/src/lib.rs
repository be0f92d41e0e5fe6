//! Symplectic linear algebra over interleaved quadrature coordinates.
//!
//! All matrices act on the coordinate vector `(x_1, p_1, ..., x_n, p_n)`
//! with `hbar = 1`, so the vacuum covariance matrix is the identity and the
//! symplectic form is the block-diagonal matrix `Omega` built from
//! `[[0, 1], [-1, 0]]` blocks (see [`omega`]).
//!
//! The crate provides:
//!
//! * [`SympMatrix`] — a validated real symplectic matrix (`S Omega S^T = Omega`),
//! * [`williamson`] — the normal form `V = S D S^T` of a covariance matrix,
//! * [`symplectic_eigenvalues`] — the `d_i` of that normal form on their own,
//! * [`euler`] — the decomposition `S = O_1 Z O_2` into orthosymplectic
//!   factors and single-mode squeezers,
//! * [`unitary_to_orthosymp`] / [`orthosymp_to_unitary`] — the one-to-one
//!   correspondence between `n x n` unitaries and `2n x 2n` orthosymplectic
//!   matrices,
//! * [`condition_number`] — the spectral condition number of a covariance
//!   matrix,
//! * basis utilities used by downstream crates: the quadrature/complex
//!   vector map [`quad_to_complex`], symplectic basis completion, unitary
//!   completion, and complex Hermitian eigen / SVD routines built on the
//!   real symmetric eigensolver ([`hermitian_eigen`], [`complex_svd`]).

mod cond;
mod error;
mod euler;
mod hermitian;
mod matrix;
mod omega;
mod passive;
mod tolerances;
mod williamson;

pub use cond::condition_number;
pub use error::SympError;
pub use euler::{euler, EulerResult};
pub use hermitian::{complex_svd, hermitian_eigen, hermitian_eigenvalues, ComplexSvd};
pub use matrix::{complete_symplectic_rows, symplectic_defect, SympMatrix};
pub use omega::omega;
pub use passive::{
    complete_unitary, complex_to_quad, orthonormalize_complex, orthosymp_to_unitary,
    quad_to_complex, unitary_to_orthosymp,
};
pub use tolerances::Tolerances;
pub use williamson::{symplectic_eigenvalues, williamson, WilliamsonResult};

/// Complex scalar used throughout the workspace.
pub type C64 = num_complex::Complex<f64>;
