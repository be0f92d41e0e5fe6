use nalgebra::{DMatrix, DVector};

use crate::error::SympError;
use crate::tolerances::Tolerances;
use crate::C64;

/// Maps a quadrature vector to its complex mode representation:
/// `f(v)_j = v_{2j} - i v_{2j+1}`.
///
/// Under this map a passive transformation acts linearly on mode space:
/// `f(embed(U) v) = conj(U) f(v)` with `embed` as in
/// [`unitary_to_orthosymp`], and the inner products relate as
/// `<f(a), f(b)> = a^T b - i a^T Omega b`.
pub fn quad_to_complex(v: &DVector<f64>) -> DVector<C64> {
    let n = v.len() / 2;
    DVector::from_iterator(n, (0..n).map(|j| C64::new(v[2 * j], -v[2 * j + 1])))
}

/// Inverse of [`quad_to_complex`].
pub fn complex_to_quad(v: &DVector<C64>) -> DVector<f64> {
    let n = v.len();
    DVector::from_iterator(2 * n, (0..2 * n).map(|k| {
        let j = k / 2;
        if k % 2 == 0 {
            v[j].re
        } else {
            -v[j].im
        }
    }))
}

/// Embeds an `n x n` unitary `U = X + iY` as the `2n x 2n` orthosymplectic
/// matrix with per-mode blocks `[[X, -Y], [Y, X]]` in interleaved ordering.
///
/// The embedding is the moment map of the passive unitary whose Heisenberg
/// action on annihilation operators is `a -> U a`; equivalently it maps the
/// coherent amplitude vector as `alpha -> U alpha`, and one-photon states
/// transform by `U` itself.
pub fn unitary_to_orthosymp(u: &DMatrix<C64>, tol: &Tolerances) -> Result<DMatrix<f64>, SympError> {
    let n = u.nrows();
    if n != u.ncols() {
        return Err(SympError::NotSquare {
            rows: n,
            cols: u.ncols(),
        });
    }
    let defect = unitarity_defect(u);
    if defect > tol.symp {
        return Err(SympError::NotUnitary {
            defect,
            tol: tol.symp,
        });
    }
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let x = u[(i, j)].re;
            let y = u[(i, j)].im;
            o[(2 * i, 2 * j)] = x;
            o[(2 * i, 2 * j + 1)] = -y;
            o[(2 * i + 1, 2 * j)] = y;
            o[(2 * i + 1, 2 * j + 1)] = x;
        }
    }
    Ok(o)
}

/// Inverse of [`unitary_to_orthosymp`]: recovers the unitary from its block
/// embedding, validating the block structure and unitarity within `tol.recon`.
pub fn orthosymp_to_unitary(
    o: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<DMatrix<C64>, SympError> {
    crate::matrix::check_even_square(o)?;
    let n = o.nrows() / 2;
    let mut u = DMatrix::zeros(n, n);
    let mut block_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = o[(2 * i, 2 * j)];
            let y = o[(2 * i + 1, 2 * j)];
            block_defect = block_defect
                .max((o[(2 * i + 1, 2 * j + 1)] - x).abs())
                .max((o[(2 * i, 2 * j + 1)] + y).abs());
            u[(i, j)] = C64::new(x, y);
        }
    }
    if block_defect > tol.recon {
        return Err(SympError::NotOrthosymplectic {
            defect: block_defect,
            tol: tol.recon,
        });
    }
    let defect = unitarity_defect(&u);
    if defect > tol.recon {
        return Err(SympError::NotUnitary {
            defect,
            tol: tol.recon,
        });
    }
    Ok(u)
}

/// `|| U^dagger U - I ||_max`.
pub(crate) fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    let gram = u.adjoint() * u;
    let mut defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            defect = defect.max((gram[(i, j)] - want).norm());
        }
    }
    defect
}

/// Orthonormalizes a family of complex vectors by modified Gram-Schmidt in
/// index order, dropping members whose residual norm (relative to the largest
/// input norm) falls below `drop_tol`.
pub fn orthonormalize_complex(vecs: &[DVector<C64>], drop_tol: f64) -> Vec<DVector<C64>> {
    let scale = vecs
        .iter()
        .map(|v| v.norm())
        .fold(0.0_f64, f64::max)
        .max(1e-300);
    let mut out: Vec<DVector<C64>> = Vec::new();
    for v in vecs {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in &out {
                let c = b.dotc(&w);
                w -= b * c;
            }
        }
        let norm = w.norm();
        if norm > drop_tol * scale {
            out.push(w / C64::new(norm, 0.0));
        }
    }
    out
}

/// Completes `k` orthonormal rows to a full `n x n` unitary.
///
/// Remaining rows are drawn from the canonical basis, projected onto the
/// orthogonal complement with the largest-residual pivot, so the result is
/// deterministic and well conditioned. The first `k` rows of the output are
/// exactly the inputs.
pub fn complete_unitary(rows: &DMatrix<C64>, tol: &Tolerances) -> Result<DMatrix<C64>, SympError> {
    let (k, n) = rows.shape();
    if k > n {
        return Err(SympError::BasisCompletion {
            detail: format!("cannot complete {k} rows in dimension {n}"),
        });
    }
    let seed: Vec<DVector<C64>> = (0..k)
        .map(|i| DVector::from_iterator(n, rows.row(i).iter().copied()).map(|c| c.conj()))
        .collect();
    // Validate orthonormality of the seed rows (as vectors, the rows are
    // conjugated; orthonormality is unaffected).
    for i in 0..k {
        for j in 0..=i {
            let want = if i == j { 1.0 } else { 0.0 };
            let d = (seed[i].dotc(&seed[j]) - C64::new(want, 0.0)).norm();
            if d > tol.recon {
                return Err(SympError::BasisCompletion {
                    detail: format!("seed rows not orthonormal: defect {d:.3e} at ({i}, {j})"),
                });
            }
        }
    }

    let mut basis = seed;
    while basis.len() < n {
        let mut best: Option<(f64, DVector<C64>)> = None;
        for idx in 0..n {
            let mut e = DVector::from_element(n, C64::new(0.0, 0.0));
            e[idx] = C64::new(1.0, 0.0);
            for b in &basis {
                let c = b.dotc(&e);
                e -= b * c;
            }
            let norm = e.norm();
            if best.as_ref().map_or(true, |(bn, _)| norm > *bn) {
                best = Some((norm, e));
            }
        }
        let (norm, w) = best.expect("dimension is positive");
        if norm < 1e-8 {
            return Err(SympError::BasisCompletion {
                detail: format!("unitary completion collapsed (residual {norm:.3e})"),
            });
        }
        basis.push(w / C64::new(norm, 0.0));
    }

    let mut out = DMatrix::zeros(n, n);
    for (i, b) in basis.iter().enumerate() {
        for j in 0..n {
            out[(i, j)] = b[j].conj();
        }
    }
    Ok(out)
}
