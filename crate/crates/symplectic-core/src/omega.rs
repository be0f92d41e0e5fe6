use nalgebra::DMatrix;

use crate::error::SympError;

/// The symplectic form on `n` modes in interleaved ordering: block diagonal
/// with one `[[0, 1], [-1, 0]]` block per mode.
pub fn omega(n: usize) -> Result<DMatrix<f64>, SympError> {
    if n == 0 {
        return Err(SympError::ZeroModes);
    }
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(2 * j, 2 * j + 1)] = 1.0;
        m[(2 * j + 1, 2 * j)] = -1.0;
    }
    Ok(m)
}

/// `Omega v` computed without materializing the form matrix.
pub(crate) fn omega_apply(v: &nalgebra::DVector<f64>) -> nalgebra::DVector<f64> {
    let dim = v.len();
    let mut out = nalgebra::DVector::zeros(dim);
    for j in 0..dim / 2 {
        out[2 * j] = v[2 * j + 1];
        out[2 * j + 1] = -v[2 * j];
    }
    out
}

/// The symplectic pairing `a^T Omega b`.
pub(crate) fn omega_pairing(a: &nalgebra::DVector<f64>, b: &nalgebra::DVector<f64>) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.len() / 2 {
        acc += a[2 * j] * b[2 * j + 1] - a[2 * j + 1] * b[2 * j];
    }
    acc
}
