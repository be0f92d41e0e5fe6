//! Stellar (holomorphic) representation of pure Gaussian states.
//!
//! The stellar function of a normalized pure state is
//! `F(z) = e^{||z||^2 / 2} <z* | psi>` with `|z*>` the coherent state of
//! amplitude `conj(z)`. For the pure Gaussian state `G_U S(xi) D(beta) |0>`
//! it is the Gaussian exponential
//! `F(z) = exp(z^T A z / 2 + w^T z + C) / N` with
//! `A = U diag(tanh xi) U^T`, `w = U b`, `b_j = beta_j / cosh xi_j`,
//! `C = sum_j (-tanh(xi_j) beta_j^2 / 2 - |beta_j|^2 / 2)` and
//! `N = sqrt(prod_j cosh xi_j)`.

use nalgebra::{DMatrix, DVector};
use symplectic_core::{Tolerances, C64};

use crate::error::GaussianError;
use crate::ops::normal_mode_decomposition;
use crate::params::{desc_to_params, GaussianParams};
use crate::types::{GaussianMoments, GaussianUnitaryDesc};

/// Gaussian-exponential stellar function `exp(z^T A z / 2 + w^T z + C) / N`.
#[derive(Clone, Debug)]
pub struct StellarGaussian {
    /// Complex symmetric matrix with operator norm `max_j tanh xi_j < 1`.
    pub a: DMatrix<C64>,
    pub w: DVector<C64>,
    pub c: C64,
    /// Positive normalizer `sqrt(prod_j cosh xi_j)`.
    pub normalizer: f64,
}

impl StellarGaussian {
    pub fn n_modes(&self) -> usize {
        self.a.nrows()
    }

    /// Evaluates the stellar function at `z`.
    pub fn eval(&self, z: &DVector<C64>) -> C64 {
        let quad = (z.transpose() * &self.a * z)[(0, 0)] * C64::new(0.5, 0.0);
        let lin = self.w.dot(z); // unconjugated: w^T z
        (quad + lin + self.c).exp() / self.normalizer
    }

    /// Value at the origin, i.e. the vacuum amplitude `<0|psi>`.
    pub fn vacuum_amplitude(&self) -> C64 {
        self.c.exp() / self.normalizer
    }
}

/// Stellar function of the pure state `G |0>` for the parametrized unitary
/// `G = G_U S(xi) D(beta) G_V` (the trailing passive factor `G_V` fixes the
/// vacuum and does not enter).
pub fn stellar_of_gaussian(p: &GaussianParams) -> StellarGaussian {
    let n = p.n_modes();
    let tanh = DVector::from_iterator(n, p.xi.iter().map(|&x| x.tanh()));
    let a = &p.u * DMatrix::from_diagonal(&tanh.map(|t| C64::new(t, 0.0))) * p.u.transpose();
    let a = (&a + a.transpose()) * C64::new(0.5, 0.0);
    let b = DVector::from_iterator(
        n,
        (0..n).map(|j| p.beta[j] / C64::new(p.xi[j].cosh(), 0.0)),
    );
    let w = &p.u * b;
    let mut c = C64::new(0.0, 0.0);
    for j in 0..n {
        let beta = p.beta[j];
        c += -beta * beta * C64::new(tanh[j] / 2.0, 0.0) - C64::new(beta.norm_sqr() / 2.0, 0.0);
    }
    let normalizer = p.xi.iter().map(|&x| x.cosh()).product::<f64>().sqrt();
    StellarGaussian { a, w, c, normalizer }
}

/// Stellar function of a pure Gaussian state given by its moments.
///
/// Mixed states are rejected: every symplectic eigenvalue must equal one
/// within `purity_tol`.
pub fn stellar_of_pure_moments(
    st: &GaussianMoments,
    purity_tol: f64,
    tol: &Tolerances,
) -> Result<StellarGaussian, GaussianError> {
    let nm = normal_mode_decomposition(st, tol)?;
    let excess = nm.nu.iter().fold(0.0_f64, |acc, &nu| acc.max(2.0 * nu));
    if excess > purity_tol {
        return Err(GaussianError::NotPure {
            excess,
            tol: purity_tol,
        });
    }
    let desc = nm.as_unitary();
    let params = desc_to_params(&desc, tol)?;
    Ok(stellar_of_gaussian(&params))
}

/// Stellar function of the pure state prepared by applying `desc` to the
/// vacuum.
pub fn stellar_of_desc(
    desc: &GaussianUnitaryDesc,
    tol: &Tolerances,
) -> Result<StellarGaussian, GaussianError> {
    let params = desc_to_params(desc, tol)?;
    Ok(stellar_of_gaussian(&params))
}
