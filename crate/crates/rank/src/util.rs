//! Shared helpers for building Gaussian unitaries from raw parameters.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use symplectic_core::{hermitian_eigen, Tolerances};

use crate::error::RankError;

/// Builds the Hermitian generator packed in `p` (diagonal first, then
/// row-major upper triangle as re/im pairs) and exponentiates it into a
/// unitary matrix.
pub(crate) fn unitary_from_generator(
    p: &[f64],
    n: usize,
    tol: &Tolerances,
) -> Result<DMatrix<C64>, RankError> {
    debug_assert_eq!(p.len(), n * n);
    let mut h = DMatrix::<C64>::zeros(n, n);
    let mut idx = 0;
    for j in 0..n {
        h[(j, j)] = C64::new(p[idx], 0.0);
        idx += 1;
    }
    for j in 0..n {
        for k in (j + 1)..n {
            let z = C64::new(p[idx], p[idx + 1]);
            idx += 2;
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
        }
    }
    let (vals, vecs) = hermitian_eigen(&h, tol)?;
    let phases = DVector::from_iterator(n, vals.iter().map(|&l| C64::new(l.cos(), l.sin())));
    Ok(&vecs * DMatrix::from_diagonal(&phases) * vecs.adjoint())
}

/// Smoothly squashes an unbounded raw coordinate into
/// `[-half_width, half_width]` (saturating at the ends); near-identity
/// around zero.
pub(crate) fn squash(raw: f64, half_width: f64) -> f64 {
    half_width * (raw / half_width).tanh()
}
