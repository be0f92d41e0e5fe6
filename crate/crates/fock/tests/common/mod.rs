//! Seeded sampling helpers shared by the fock tests.
#![allow(dead_code)] // each test target uses a different subset

use std::collections::HashMap;

use gaussian::{params_to_desc, GaussianParams, GaussianUnitaryDesc};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use symplectic_core::{Tolerances, C64};

use fock::FockState;

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

/// Random Gaussian unitary description with bounded squeezing and
/// displacement, sampled through the normal form.
pub fn random_desc<R: Rng>(
    rng: &mut R,
    n: usize,
    xi_max: f64,
    beta_max: f64,
) -> GaussianUnitaryDesc {
    let params = GaussianParams {
        u: random_unitary(rng, n),
        v: random_unitary(rng, n),
        xi: DVector::from_fn(n, |_, _| rng.gen_range(0.0..xi_max)),
        beta: DVector::from_fn(n, |_, _| {
            Complex64::new(
                rng.gen_range(-beta_max..beta_max),
                rng.gen_range(-beta_max..beta_max),
            )
        }),
    };
    params_to_desc(&params, &Tolerances::default()).expect("sampled parameters are valid")
}

/// Random normalized state supported on `support` tuples within the cutoff.
pub fn random_state<R: Rng>(rng: &mut R, n_modes: usize, cutoff: usize, support: usize) -> FockState {
    let mut amps: HashMap<Vec<u16>, C64> = HashMap::new();
    while amps.len() < support {
        let mut budget = cutoff;
        let mut t = vec![0u16; n_modes];
        for slot in t.iter_mut() {
            let k = rng.gen_range(0..=budget.min(4));
            *slot = k as u16;
            budget -= k;
        }
        amps.insert(
            t,
            C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
    }
    FockState::from_amplitudes(n_modes, cutoff, amps)
        .expect("sampled tuples within cutoff")
        .normalized()
        .expect("nonzero amplitude set")
}

/// Largest absolute entry-wise difference between two real matrices.
pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
