//! Seeded sampling helpers shared by the gaussian tests.
#![allow(dead_code)] // each test target uses a different subset

use gaussian::{apply_to_moments, params_to_desc, GaussianMoments, GaussianParams, GaussianUnitaryDesc};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use symplectic_core::{Tolerances, C64};

/// Random unitary via modified Gram-Schmidt of a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v = DVector::from_fn(n, |_, _| {
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        for b in &cols {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            cols.push(v / C64::new(norm, 0.0));
        }
    }
    DMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Random Gaussian unitary parameters with squeezing magnitudes up to
/// `xi_max` and displacement magnitudes up to `beta_max` per mode.
pub fn random_params<R: Rng>(
    rng: &mut R,
    n: usize,
    xi_max: f64,
    beta_max: f64,
) -> GaussianParams {
    GaussianParams {
        u: random_unitary(rng, n),
        v: random_unitary(rng, n),
        xi: DVector::from_fn(n, |_, _| rng.gen_range(0.0..xi_max)),
        beta: DVector::from_fn(n, |_, _| {
            Complex64::new(
                rng.gen_range(-beta_max..beta_max),
                rng.gen_range(-beta_max..beta_max),
            )
        }),
    }
}

/// Random Gaussian unitary description sampled through its normal form.
pub fn random_desc<R: Rng>(rng: &mut R, n: usize, xi_max: f64, beta_max: f64) -> GaussianUnitaryDesc {
    let params = random_params(rng, n, xi_max, beta_max);
    params_to_desc(&params, &Tolerances::default()).expect("sampled parameters are valid")
}

/// Random pure Gaussian state: a random unitary applied to the vacuum.
pub fn random_pure_state<R: Rng>(rng: &mut R, n: usize, xi_max: f64, beta_max: f64) -> GaussianMoments {
    let desc = random_desc(rng, n, xi_max, beta_max);
    apply_to_moments(&desc, &GaussianMoments::vacuum(n)).expect("dimensions agree")
}

/// Largest absolute entry of `a - b`; panics if the shapes differ.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    (a - b).amax()
}
