//! Complex Hermitian eigendecomposition and complex SVD built on the real
//! symmetric eigensolver.
//!
//! A Hermitian matrix `H = A + iB` embeds as the real symmetric matrix
//! `M = [[A, -B], [B, A]]` whose spectrum is that of `H` with every
//! eigenvalue doubled; a real eigenvector `(x; y)` of `M` corresponds to the
//! complex eigenvector `x + iy` of `H`. This avoids relying on complex
//! decompositions of the underlying linear-algebra library.

use nalgebra::{DMatrix, DVector};

use crate::error::SympError;
use crate::passive::orthonormalize_complex;
use crate::tolerances::Tolerances;
use crate::C64;

/// Eigendecomposition of a complex Hermitian matrix.
///
/// Returns `(values, vectors)` with eigenvalues ascending and the columns of
/// `vectors` forming the matching orthonormal eigenbasis.
pub fn hermitian_eigen(
    h: &DMatrix<C64>,
    tol: &Tolerances,
) -> Result<(Vec<f64>, DMatrix<C64>), SympError> {
    let k = h.nrows();
    if k != h.ncols() {
        return Err(SympError::NotSquare {
            rows: k,
            cols: h.ncols(),
        });
    }
    if k == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let scale = h.map(|c| c.norm()).max().max(1.0);
    let herm_defect = (h - h.adjoint()).map(|c| c.norm()).max();
    if herm_defect > tol.symp * scale {
        return Err(SympError::NotSymmetric {
            defect: herm_defect,
            tol: tol.symp * scale,
        });
    }

    let mut m = DMatrix::<f64>::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            let a = h[(i, j)].re;
            let b = h[(i, j)].im;
            m[(i, j)] = a;
            m[(i, j + k)] = -b;
            m[(i + k, j)] = b;
            m[(i + k, j + k)] = a;
        }
    }
    // Symmetrize away roundoff before the eigensolve.
    let m = (&m + m.transpose()) * 0.5;
    let eig = m.symmetric_eigen();

    let mut order: Vec<usize> = (0..2 * k).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());

    // Walk ascending eigenvalues in near-degenerate clusters; each cluster of
    // 2m real eigenpairs yields m complex eigenvectors.
    let gap = (tol.pair * scale).max(1e-12 * scale);
    let mut values = Vec::with_capacity(k);
    let mut columns: Vec<DVector<C64>> = Vec::with_capacity(k);
    let mut start = 0;
    while start < 2 * k {
        let mut end = start + 1;
        while end < 2 * k
            && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] <= gap
        {
            end += 1;
        }
        let cluster = &order[start..end];
        if cluster.len() % 2 != 0 {
            return Err(SympError::PairingFailure {
                detail: format!(
                    "hermitian embedding produced an odd cluster of size {} near eigenvalue {}",
                    cluster.len(),
                    eig.eigenvalues[cluster[0]]
                ),
            });
        }
        let mean: f64 =
            cluster.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / cluster.len() as f64;
        let candidates: Vec<DVector<C64>> = cluster
            .iter()
            .map(|&i| {
                let col = eig.eigenvectors.column(i);
                DVector::from_fn(k, |j, _| C64::new(col[j], col[j + k]))
            })
            .collect();
        let basis = orthonormalize_complex(&candidates, 1e-6);
        if basis.len() != cluster.len() / 2 {
            return Err(SympError::PairingFailure {
                detail: format!(
                    "cluster near eigenvalue {mean} reduced to {} complex vectors, expected {}",
                    basis.len(),
                    cluster.len() / 2
                ),
            });
        }
        for v in basis {
            values.push(mean);
            columns.push(v);
        }
        start = end;
    }

    let q = DMatrix::from_fn(k, k, |i, j| columns[j][i]);
    let residual = (h * &q
        - &q * DMatrix::from_diagonal(&DVector::from_iterator(
            k,
            values.iter().map(|&v| C64::new(v, 0.0)),
        )))
    .map(|c| c.norm())
    .max();
    if residual > tol.recon * scale.max(1.0) * 10.0 {
        return Err(SympError::Reconstruction {
            defect: residual,
            tol: tol.recon * scale * 10.0,
        });
    }
    Ok((values, q))
}

/// Eigenvalues of a complex Hermitian matrix, ascending, without
/// eigenvectors.
///
/// Unlike [`hermitian_eigen`] this performs no degeneracy clustering: the
/// doubled spectrum of the real embedding is collapsed by averaging adjacent
/// sorted pairs, which is exact up to solver roundoff. Use this for dense
/// spectra (density operators, trace norms) where near-zero eigenvalues sit
/// closer together than any clustering tolerance.
pub fn hermitian_eigenvalues(h: &DMatrix<C64>, tol: &Tolerances) -> Result<Vec<f64>, SympError> {
    let k = h.nrows();
    if k != h.ncols() {
        return Err(SympError::NotSquare {
            rows: k,
            cols: h.ncols(),
        });
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    let scale = h.map(|c| c.norm()).max().max(1.0);
    let herm_defect = (h - h.adjoint()).map(|c| c.norm()).max();
    if herm_defect > tol.symp * scale {
        return Err(SympError::NotSymmetric {
            defect: herm_defect,
            tol: tol.symp * scale,
        });
    }

    let mut m = DMatrix::<f64>::zeros(2 * k, 2 * k);
    for i in 0..k {
        for j in 0..k {
            let a = h[(i, j)].re;
            let b = h[(i, j)].im;
            m[(i, j)] = a;
            m[(i, j + k)] = -b;
            m[(i + k, j)] = b;
            m[(i + k, j + k)] = a;
        }
    }
    let m = (&m + m.transpose()) * 0.5;
    let eig = m.symmetric_eigen();
    let mut mu: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    mu.sort_by(|a, b| a.partial_cmp(b).expect("symmetric eigenvalues are finite"));
    Ok((0..k).map(|i| 0.5 * (mu[2 * i] + mu[2 * i + 1])).collect())
}

/// Singular value decomposition of a complex matrix, `a = u * diag(sigma) * v^dagger`.
#[derive(Clone, Debug)]
pub struct ComplexSvd {
    /// Left singular vectors (square unitary, `rows x rows`).
    pub u: DMatrix<C64>,
    /// Singular values, descending, of length `min(rows, cols)`.
    pub sigma: Vec<f64>,
    /// Right singular vectors (square unitary, `cols x cols`).
    pub v: DMatrix<C64>,
}

/// Complex SVD via a Hermitian eigendecomposition of the smaller Gram matrix.
pub fn complex_svd(a: &DMatrix<C64>, tol: &Tolerances) -> Result<ComplexSvd, SympError> {
    let (rows, cols) = (a.nrows(), a.ncols());
    if rows == 0 || cols == 0 {
        return Err(SympError::ZeroModes);
    }
    if rows > cols {
        let flipped = complex_svd(&a.adjoint(), tol)?;
        return Ok(ComplexSvd {
            u: flipped.v,
            sigma: flipped.sigma,
            v: flipped.u,
        });
    }

    let gram = a * a.adjoint();
    let (lambda, q) = hermitian_eigen(&gram, tol)?;
    // Descending singular values.
    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by(|&i, &j| lambda[j].partial_cmp(&lambda[i]).unwrap());
    let sigma: Vec<f64> = order.iter().map(|&i| lambda[i].max(0.0).sqrt()).collect();
    let u = DMatrix::from_fn(rows, rows, |i, j| q[(i, order[j])]);

    // The Gram route cannot resolve singular values below ~sqrt(eps) * max;
    // directions beneath the cut are filled in by basis completion instead.
    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let cut = sigma_max * 1e-7;
    let rank = sigma.iter().take_while(|&&s| s > cut && s > 1e-14).count();

    // v_i = A^dagger u_i / sigma_i for the range part; complete the rest.
    let mut v_rows = DMatrix::<C64>::zeros(rank, cols);
    for i in 0..rank {
        let ui = DVector::from_fn(rows, |r, _| u[(r, i)]);
        let vi = a.adjoint() * ui / C64::new(sigma[i], 0.0);
        for j in 0..cols {
            v_rows[(i, j)] = vi[j].conj();
        }
    }
    let w = crate::passive::complete_unitary(&v_rows, tol)?;
    let v = w.adjoint();

    // Validate the reconstruction.
    let mut sig_rect = DMatrix::<C64>::zeros(rows, cols);
    for (i, &s) in sigma.iter().enumerate() {
        sig_rect[(i, i)] = C64::new(s, 0.0);
    }
    let recon = &u * sig_rect * v.adjoint();
    let scale = a.map(|c| c.norm()).max().max(1.0);
    let defect = (recon - a).map(|c| c.norm()).max();
    if defect > tol.recon * scale * 10.0 {
        return Err(SympError::Reconstruction {
            defect,
            tol: tol.recon * scale * 10.0,
        });
    }
    Ok(ComplexSvd { u, sigma, v })
}
