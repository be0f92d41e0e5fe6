use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::SympError;
use crate::matrix::SympMatrix;
use crate::omega::omega_apply;
use crate::tolerances::Tolerances;

/// Euler (Bloch-Messiah) decomposition of a symplectic matrix:
/// `S = O_1 Z O_2` with `O_1`, `O_2` orthosymplectic and
/// `Z = diag(z_1, 1/z_1, ..., z_n, 1/z_n)`, `z_i >= 1` sorted descending.
#[derive(Clone, Debug)]
pub struct EulerResult {
    pub o1: SympMatrix,
    pub z: Vec<f64>,
    pub o2: SympMatrix,
}

impl EulerResult {
    /// The squeezing factor `diag(z_1, 1/z_1, ..., z_n, 1/z_n)`.
    pub fn z_matrix(&self) -> DMatrix<f64> {
        let dim = 2 * self.z.len();
        DMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            self.z.iter().flat_map(|&z| [z, 1.0 / z]),
        ))
    }

    /// Rebuilds `O_1 Z O_2`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        self.o1.as_matrix() * self.z_matrix() * self.o2.as_matrix()
    }
}

fn validate_orthosymplectic(
    m: DMatrix<f64>,
    tol: &Tolerances,
) -> Result<SympMatrix, SympError> {
    let dim = m.nrows();
    let ortho_defect = (m.transpose() * &m - DMatrix::identity(dim, dim)).amax();
    if ortho_defect > tol.recon {
        return Err(SympError::NotOrthogonal {
            defect: ortho_defect,
            tol: tol.recon,
        });
    }
    SympMatrix::new(m, tol)
}

/// Euler decomposition through the polar form: `P = (S S^T)^{1/2}` is
/// symplectic positive definite, its eigenvalues pair as `(z, 1/z)` with
/// eigenvectors `(u, -Omega u)`, and `O_2 = Z^{-1} O_1^T S`.
pub fn euler(s: &SympMatrix, tol: &Tolerances) -> Result<EulerResult, SympError> {
    let m = s.as_matrix();
    let dim = m.nrows();
    let n = dim / 2;

    let p2 = m * m.transpose();
    let eig = SymmetricEigen::new(p2);
    // Eigenvalues of P are the square roots of those of P^2 (same vectors).
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("finite")
    });
    let p_vals: Vec<f64> = order
        .iter()
        .map(|&i| eig.eigenvalues[i].max(0.0).sqrt())
        .collect();

    // Cluster the descending eigenvalues of P.
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    {
        let mut start = 0;
        for i in 1..=dim {
            let split = i == dim || {
                let scale = p_vals[i - 1].max(1.0);
                (p_vals[i - 1] - p_vals[i]).abs() > tol.pair * scale
            };
            if split {
                clusters.push((start, i));
                start = i;
            }
        }
    }

    let band = tol.pair;
    let mut z = Vec::with_capacity(n);
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut count_above = 0usize;
    let mut count_below = 0usize;
    let mut count_one = 0usize;

    let gauge = |u: &mut DVector<f64>, w: &mut DVector<f64>| {
        let scale = u.amax();
        if let Some(idx) = (0..u.len()).find(|&i| u[i].abs() > 1e-9 * scale) {
            if u[idx] < 0.0 {
                *u = -&*u;
                *w = -&*w;
            }
        }
    };

    for &(lo, hi) in &clusters {
        let len = hi - lo;
        let z_cluster = p_vals[lo..hi].iter().sum::<f64>() / len as f64;
        if z_cluster > 1.0 + band {
            count_above += len;
            // Partners -Omega u live in the 1/z eigenspace and are collected
            // implicitly; orthogonality across pairs is automatic here.
            let mut basis: Vec<DVector<f64>> = (lo..hi)
                .map(|k| eig.eigenvectors.column(order[k]).into_owned())
                .collect();
            orthonormalize(&mut basis)?;
            for u in basis {
                let mut u = u;
                let mut w = -omega_apply(&u);
                gauge(&mut u, &mut w);
                columns.push(u);
                columns.push(w);
                z.push(z_cluster);
            }
        } else if z_cluster < 1.0 - band {
            count_below += len;
        } else {
            count_one += len;
            if len % 2 != 0 {
                return Err(SympError::PairingFailure {
                    detail: format!("unit eigenvalue cluster of odd size {len}"),
                });
            }
            // Inside the unit cluster Omega maps the eigenspace to itself, so
            // partners must be peeled off pair by pair.
            let mut basis: Vec<DVector<f64>> = (lo..hi)
                .map(|k| eig.eigenvectors.column(order[k]).into_owned())
                .collect();
            orthonormalize(&mut basis)?;
            while !basis.is_empty() {
                let mut u = basis[0].clone();
                u /= u.norm();
                let mut w = -omega_apply(&u);
                gauge(&mut u, &mut w);
                let mut leftovers: Vec<DVector<f64>> = basis
                    .drain(1..)
                    .map(|mut v| {
                        v -= &u * u.dot(&v);
                        v -= &w * w.dot(&v);
                        v
                    })
                    .collect();
                let target = leftovers.len().saturating_sub(1);
                let mut next = Vec::with_capacity(target);
                while next.len() < target {
                    let (best_idx, best_norm) = leftovers
                        .iter()
                        .enumerate()
                        .map(|(i, v)| (i, v.norm()))
                        .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))
                        .ok_or_else(|| SympError::PairingFailure {
                            detail: "unit cluster exhausted during pairing".to_string(),
                        })?;
                    if best_norm < 1e-6 {
                        return Err(SympError::PairingFailure {
                            detail: format!("unit cluster collapsed (residual {best_norm:.3e})"),
                        });
                    }
                    let picked = leftovers.remove(best_idx) / best_norm;
                    for v in &mut leftovers {
                        *v -= &picked * picked.dot(v);
                    }
                    next.push(picked);
                }
                columns.push(u);
                columns.push(w);
                z.push(1.0);
                basis = next;
            }
        }
    }

    if count_above != count_below || count_one % 2 != 0 || z.len() != n {
        return Err(SympError::PairingFailure {
            detail: format!(
                "eigenvalue census does not pair up: {count_above} above, {count_below} below, \
                 {count_one} at one ({} pairs built, expected {n})",
                z.len()
            ),
        });
    }

    let mut o1 = DMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        o1.set_column(j, col);
    }
    let o1 = validate_orthosymplectic(o1, tol)?;

    let z_clamped: Vec<f64> = z.iter().map(|&zi| zi.max(1.0)).collect();
    let z_inv = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        z_clamped.iter().flat_map(|&zi| [1.0 / zi, zi]),
    ));
    let o2 = z_inv * o1.as_matrix().transpose() * m;
    let o2 = validate_orthosymplectic(o2, tol)?;

    let result = EulerResult {
        o1,
        z: z_clamped,
        o2,
    };
    let defect = (result.reconstruct() - m).amax();
    let scale = m.amax().max(1.0);
    if defect > tol.recon * scale {
        return Err(SympError::Reconstruction {
            defect,
            tol: tol.recon * scale,
        });
    }
    Ok(result)
}

/// Modified Gram-Schmidt in place; fails if the set is numerically dependent.
fn orthonormalize(basis: &mut [DVector<f64>]) -> Result<(), SympError> {
    for i in 0..basis.len() {
        for j in 0..i {
            let c = basis[j].dot(&basis[i]);
            let proj = &basis[j] * c;
            basis[i] -= proj;
        }
        let norm = basis[i].norm();
        if norm < 1e-8 {
            return Err(SympError::PairingFailure {
                detail: format!("eigenvector cluster is numerically dependent (norm {norm:.3e})"),
            });
        }
        basis[i] /= norm;
    }
    Ok(())
}
