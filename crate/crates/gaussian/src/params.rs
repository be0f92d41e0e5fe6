//! Complex-notation parametrization `G = G_U S(xi) D(beta) G_V` of a
//! Gaussian unitary, and the conversion to and from the real descriptor.
//!
//! `G_U`, `G_V` are passive unitaries, `S(xi) = prod_j exp(xi_j (a_j^dag^2 -
//! a_j^2)/2)` is a product of single-mode squeezers with `xi_j >= 0`, and
//! `D(beta) = prod_j exp(beta_j a_j^dag - beta_j^* a_j)` is a displacement.
//! Applied to the vacuum, `G_V` acts trivially, so `(U, xi, beta)` alone
//! parametrize pure Gaussian states.

use nalgebra::{DMatrix, DVector};
use symplectic_core::{
    euler, orthosymp_to_unitary, unitary_to_orthosymp, SympMatrix, Tolerances, C64,
};

use crate::error::GaussianError;
use crate::types::GaussianUnitaryDesc;

/// The tuple `(U, V, xi, beta)` of the complex-notation factorization.
#[derive(Clone, Debug)]
pub struct GaussianParams {
    pub u: DMatrix<C64>,
    pub v: DMatrix<C64>,
    pub xi: DVector<f64>,
    pub beta: DVector<C64>,
}

impl GaussianParams {
    pub fn new(
        u: DMatrix<C64>,
        v: DMatrix<C64>,
        xi: DVector<f64>,
        beta: DVector<C64>,
    ) -> Result<Self, GaussianError> {
        let n = u.nrows();
        let dims = [u.ncols(), v.nrows(), v.ncols(), xi.len(), beta.len()];
        if let Some(&got) = dims.iter().find(|&&d| d != n) {
            return Err(GaussianError::DimensionMismatch { expected: n, got });
        }
        Ok(Self { u, v, xi, beta })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            u: DMatrix::identity(n, n),
            v: DMatrix::identity(n, n),
            xi: DVector::zeros(n),
            beta: DVector::from_element(n, C64::new(0.0, 0.0)),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.u.nrows()
    }
}

/// Quadrature displacement vector of `D(beta)`:
/// `r_{2j} = sqrt(2) Re beta_j`, `r_{2j+1} = sqrt(2) Im beta_j`.
pub fn displacement_from_beta(beta: &DVector<C64>) -> DVector<f64> {
    let n = beta.len();
    DVector::from_iterator(
        2 * n,
        (0..2 * n).map(|k| {
            let b = beta[k / 2];
            let val = if k % 2 == 0 { b.re } else { b.im };
            val * std::f64::consts::SQRT_2
        }),
    )
}

/// Inverse of [`displacement_from_beta`].
pub fn beta_from_displacement(r: &DVector<f64>) -> DVector<C64> {
    let n = r.len() / 2;
    DVector::from_iterator(
        n,
        (0..n).map(|j| C64::new(r[2 * j], r[2 * j + 1]) / std::f64::consts::SQRT_2),
    )
}

fn squeeze_matrix(xi: &DVector<f64>, invert: bool) -> DMatrix<f64> {
    let n = xi.len();
    DMatrix::from_diagonal(&DVector::from_iterator(
        2 * n,
        (0..2 * n).map(|k| {
            let sign = if (k % 2 == 0) != invert { 1.0 } else { -1.0 };
            (sign * xi[k / 2]).exp()
        }),
    ))
}

/// Converts the complex-notation parameters to the real descriptor.
///
/// The moment action factorizes as `S = O_U Z O_V` and `r = O_U Z r_beta`
/// with `Z = diag(e^{xi_1}, e^{-xi_1}, ...)` and `r_beta` as in
/// [`displacement_from_beta`].
pub fn params_to_desc(
    p: &GaussianParams,
    tol: &Tolerances,
) -> Result<GaussianUnitaryDesc, GaussianError> {
    let o_u = unitary_to_orthosymp(&p.u, tol)?;
    let o_v = unitary_to_orthosymp(&p.v, tol)?;
    let z = squeeze_matrix(&p.xi, false);
    let s = SympMatrix::new(&o_u * &z * o_v, tol)?;
    let r = o_u * z * displacement_from_beta(&p.beta);
    GaussianUnitaryDesc::new(s, r)
}

/// Converts the real descriptor to complex-notation parameters via the Euler
/// decomposition `S = O_1 Z O_2`, with `xi = ln z >= 0` and
/// `beta = beta(Z^{-1} O_1^T r)`.
pub fn desc_to_params(
    desc: &GaussianUnitaryDesc,
    tol: &Tolerances,
) -> Result<GaussianParams, GaussianError> {
    let e = euler(desc.s(), tol)?;
    let u = orthosymp_to_unitary(e.o1.as_matrix(), tol)?;
    let v = orthosymp_to_unitary(e.o2.as_matrix(), tol)?;
    let xi = DVector::from_iterator(e.z.len(), e.z.iter().map(|&z| z.ln().max(0.0)));
    let r_beta = squeeze_matrix(&xi, true) * e.o1.as_matrix().transpose() * desc.r();
    let beta = beta_from_displacement(&r_beta);
    GaussianParams::new(u, v, xi, beta)
}
