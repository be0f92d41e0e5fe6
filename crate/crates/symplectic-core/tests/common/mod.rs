//! Seeded sampling helpers shared by the decomposition tests.
#![allow(dead_code)] // each test target uses a different subset

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use symplectic_core::{unitary_to_orthosymp, Tolerances, C64};

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

pub fn random_orthosymp<R: Rng>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let u = random_unitary(rng, n);
    unitary_to_orthosymp(&u, &Tolerances::default()).expect("sampled matrix is unitary")
}

/// Random symplectic matrix `O_1 Z O_2` with squeezing factors in
/// `[1/z_max, z_max]`.
pub fn random_symplectic<R: Rng>(rng: &mut R, n: usize, z_max: f64) -> DMatrix<f64> {
    let o1 = random_orthosymp(rng, n);
    let o2 = random_orthosymp(rng, n);
    let z = DMatrix::from_diagonal(&DVector::from_iterator(
        2 * n,
        (0..n).flat_map(|_| {
            let z: f64 = rng.gen_range(1.0..z_max);
            [z, 1.0 / z]
        })
        .collect::<Vec<_>>(),
    ));
    o1 * z * o2
}

/// Random covariance matrix `S D S^T` with symplectic eigenvalues in
/// `[1, d_max]`; returns `(V, d_sorted_descending)`.
pub fn random_cov<R: Rng>(rng: &mut R, n: usize, d_max: f64, z_max: f64) -> (DMatrix<f64>, Vec<f64>) {
    let s = random_symplectic(rng, n, z_max);
    let mut d: Vec<f64> = (0..n).map(|_| rng.gen_range(1.0..d_max)).collect();
    let dm = DMatrix::from_diagonal(&DVector::from_iterator(
        2 * n,
        d.iter().flat_map(|&di| [di, di]).collect::<Vec<_>>(),
    ));
    let v = &s * dm * s.transpose();
    d.sort_by(|a, b| b.partial_cmp(a).unwrap());
    (v, d)
}
