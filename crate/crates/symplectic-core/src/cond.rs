use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::SympError;
use crate::matrix::check_even_square;
use crate::tolerances::Tolerances;

/// Spectral condition number of a covariance matrix,
/// `lambda_max(V) / lambda_min(V)`.
pub fn condition_number(v: &DMatrix<f64>, tol: &Tolerances) -> Result<f64, SympError> {
    check_even_square(v)?;
    let asym = (v - v.transpose()).amax();
    let scale = v.amax().max(1.0);
    if asym > tol.symp * scale {
        return Err(SympError::NotSymmetric {
            defect: asym,
            tol: tol.symp * scale,
        });
    }
    let eig = SymmetricEigen::new((v + v.transpose()) * 0.5);
    let min = eig.eigenvalues.min();
    let max = eig.eigenvalues.max();
    if min <= 0.0 {
        return Err(SympError::NotPositiveDefinite { min_eig: min });
    }
    Ok(max / min)
}
