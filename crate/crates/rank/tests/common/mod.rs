//! Seeded sampling helpers shared by the rank tests.
#![allow(dead_code)] // each test target uses a different subset

use fock::{apply_gaussian, FockState, GateOptions};
use gaussian::{params_to_desc, GaussianParams, GaussianUnitaryDesc};
use nalgebra::{DMatrix, DVector};
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

/// Random Gaussian unitary description with bounded squeezing and
/// displacement, sampled through the normal form.
pub fn mild_desc<R: Rng>(
    rng: &mut R,
    n: usize,
    xi_max: f64,
    beta_max: f64,
) -> GaussianUnitaryDesc {
    let params = GaussianParams {
        u: random_unitary(rng, n),
        v: random_unitary(rng, n),
        xi: DVector::from_fn(n, |_, _| rng.gen_range(-xi_max..xi_max)),
        beta: DVector::from_fn(n, |_, _| {
            C64::new(
                rng.gen_range(-beta_max..beta_max),
                rng.gen_range(-beta_max..beta_max),
            )
        }),
    };
    params_to_desc(&params, &Tolerances::default()).expect("sampled parameters are valid")
}

/// Gate options with room for the mild descriptions above at test cutoffs.
pub fn lenient_gate_options() -> GateOptions {
    GateOptions {
        leak_budget: 1e-6,
        ..GateOptions::default()
    }
}

/// Pads `core` with vacuum modes up to `n_modes`, widens to `cutoff`, and
/// applies `desc`; the result has the same symplectic rank as `core`.
pub fn dress(
    core: &FockState,
    n_modes: usize,
    cutoff: usize,
    desc: &GaussianUnitaryDesc,
    opts: &GateOptions,
) -> FockState {
    let pad = n_modes - core.n_modes();
    let padded = if pad == 0 {
        core.clone()
    } else {
        core.tensor(&FockState::vacuum(pad, 0))
    };
    let widened = padded.with_cutoff(cutoff);
    let outcome = apply_gaussian(&widened, desc, opts).expect("dressing gate within leak budget");
    outcome
        .state
        .normalized()
        .expect("unitary keeps the state normalizable")
}

/// Two-point superposition `sqrt(1 - w) |0..0> + sqrt(w) |tuple>`.
pub fn two_point_state(tuple: &[u16], weight: f64, cutoff: usize) -> FockState {
    let n = tuple.len();
    let amps = std::collections::HashMap::from([
        (vec![0u16; n], C64::new((1.0 - weight).sqrt(), 0.0)),
        (tuple.to_vec(), C64::new(weight.sqrt(), 0.0)),
    ]);
    FockState::from_amplitudes(n, cutoff, amps).expect("tuple within cutoff")
}
