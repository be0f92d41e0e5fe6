use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::SympError;
use crate::matrix::{check_even_square, SympMatrix};
use crate::omega::omega;
use crate::tolerances::Tolerances;

/// Williamson normal form of a covariance matrix: `V = S D S^T` with `S`
/// symplectic and `D = diag(d_1, d_1, ..., d_n, d_n)`.
///
/// The symplectic eigenvalues `d` are sorted in descending order and satisfy
/// `d_i >= 1 - tol.symp` (covariance matrices of quantum states never dip
/// below the vacuum floor).
#[derive(Clone, Debug)]
pub struct WilliamsonResult {
    pub s: SympMatrix,
    pub d: Vec<f64>,
}

impl WilliamsonResult {
    /// The diagonal factor `diag(d_1, d_1, ..., d_n, d_n)`.
    pub fn d_matrix(&self) -> DMatrix<f64> {
        let dim = 2 * self.d.len();
        DMatrix::from_diagonal(&DVector::from_iterator(
            dim,
            self.d.iter().flat_map(|&d| [d, d]),
        ))
    }

    /// Rebuilds `S D S^T`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let s = self.s.as_matrix();
        s * self.d_matrix() * s.transpose()
    }
}

/// Validates symmetry and positive definiteness, returning the
/// eigendecomposition of `v`.
fn spd_eigen(v: &DMatrix<f64>, tol: &Tolerances) -> Result<SymmetricEigen<f64, nalgebra::Dyn>, SympError> {
    check_even_square(v)?;
    let asym = (v - v.transpose()).amax();
    let scale = v.amax().max(1.0);
    if asym > tol.symp * scale {
        return Err(SympError::NotSymmetric {
            defect: asym,
            tol: tol.symp * scale,
        });
    }
    let sym = (v + v.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let min_eig = eig.eigenvalues.min();
    if min_eig <= 0.0 {
        return Err(SympError::NotPositiveDefinite { min_eig });
    }
    Ok(eig)
}

fn apply_to_eigenvalues(eig: &SymmetricEigen<f64, nalgebra::Dyn>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let mapped = eig.eigenvalues.map(f);
    &eig.eigenvectors * DMatrix::from_diagonal(&mapped) * eig.eigenvectors.transpose()
}

/// Groups a sorted slice into clusters whose adjacent relative gap is below
/// `rel_tol`, returning half-open index ranges.
fn cluster_sorted(vals: &[f64], rel_tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=vals.len() {
        let split = if i == vals.len() {
            true
        } else {
            let scale = vals[i].abs().max(vals[i - 1].abs()).max(1e-300);
            (vals[i] - vals[i - 1]).abs() > rel_tol * scale.max(1.0)
        };
        if split {
            out.push((start, i));
            start = i;
        }
    }
    out
}

/// The symplectic eigenvalues of a positive-definite covariance matrix,
/// sorted in descending order.
///
/// Computed from the spectrum of `-(M Omega M)^2` with `M = V^{1/2}`: its
/// eigenvalues are the `d_i^2`, each with even multiplicity. Clusters of odd
/// multiplicity indicate that roundoff broke the pairing and are reported as
/// [`SympError::PairingFailure`].
pub fn symplectic_eigenvalues(
    v: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<Vec<f64>, SympError> {
    let eig = spd_eigen(v, tol)?;
    let n = v.nrows() / 2;
    let m_sqrt = apply_to_eigenvalues(&eig, f64::sqrt);
    let om = omega(n)?;
    let a = &m_sqrt * om * &m_sqrt;
    let b = a.transpose() * &a;
    let mut mu: Vec<f64> = SymmetricEigen::new(b).eigenvalues.iter().copied().collect();
    mu.sort_by(|x, y| x.partial_cmp(y).expect("symmetric eigenvalues are finite"));

    let mut d = Vec::with_capacity(n);
    for (lo, hi) in cluster_sorted(&mu, tol.pair) {
        let len = hi - lo;
        if len % 2 != 0 {
            return Err(SympError::PairingFailure {
                detail: format!(
                    "cluster of {} eigenvalues near {:.6e} has odd multiplicity",
                    len,
                    mu[lo]
                ),
            });
        }
        let mean = mu[lo..hi].iter().sum::<f64>() / len as f64;
        if mean <= 0.0 {
            return Err(SympError::PairingFailure {
                detail: format!("non-positive squared symplectic eigenvalue {mean:.6e}"),
            });
        }
        for _ in 0..len / 2 {
            d.push(mean.sqrt());
        }
    }
    d.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    Ok(d)
}

/// Orthonormal canonical pairs of an antisymmetric matrix restricted to a
/// degenerate eigen-cluster of `B = A^T A`.
///
/// For each extracted pair `(u, v = -c A u)` the block `u^T A v` equals the
/// canonical parameter `1/c`, pairs are mutually orthogonal, and the sign of
/// the leading significant entry of `u` is made positive (with `v` locked to
/// `u`) so the output is deterministic.
fn extract_pairs(
    a: &DMatrix<f64>,
    basis: Vec<DVector<f64>>,
    c: f64,
) -> Result<Vec<(DVector<f64>, DVector<f64>)>, SympError> {
    let cluster_len = basis.len();
    if cluster_len % 2 != 0 {
        return Err(SympError::PairingFailure {
            detail: format!("eigenvector cluster of odd size {cluster_len}"),
        });
    }
    let mut remaining = basis;
    let mut pairs = Vec::with_capacity(cluster_len / 2);
    while !remaining.is_empty() {
        let mut u = remaining[0].clone();
        u /= u.norm();
        let mut v = a * &u * (-c);
        let v_norm = v.norm();
        if (v_norm - 1.0).abs() > 1e-6 {
            return Err(SympError::PairingFailure {
                detail: format!("canonical partner has norm {v_norm:.6}, expected 1"),
            });
        }
        v /= v_norm;
        // Deterministic sign gauge: first significant entry of u positive.
        let scale = u.amax();
        if let Some(idx) = (0..u.len()).find(|&i| u[i].abs() > 1e-9 * scale) {
            if u[idx] < 0.0 {
                u = -u;
                v = -v;
            }
        }

        // Remove span{u, v} and re-orthonormalize the leftovers, pivoting on
        // the largest residual so degenerate clusters stay well conditioned.
        let mut leftovers: Vec<DVector<f64>> = remaining
            .drain(1..)
            .map(|mut w| {
                w -= &u * u.dot(&w);
                w -= &v * v.dot(&w);
                w
            })
            .collect();
        let target = leftovers.len().saturating_sub(1);
        let mut next = Vec::with_capacity(target);
        while next.len() < target {
            let (best_idx, best_norm) = leftovers
                .iter()
                .enumerate()
                .map(|(i, w)| (i, w.norm()))
                .max_by(|x, y| x.1.partial_cmp(&y.1).expect("finite"))
                .ok_or_else(|| SympError::PairingFailure {
                    detail: "cluster basis exhausted during pair extraction".to_string(),
                })?;
            if best_norm < 1e-6 {
                return Err(SympError::PairingFailure {
                    detail: format!("cluster basis collapsed (residual {best_norm:.3e})"),
                });
            }
            let picked = leftovers.remove(best_idx) / best_norm;
            for w in &mut leftovers {
                *w -= &picked * picked.dot(w);
            }
            next.push(picked);
        }
        pairs.push((u, v));
        remaining = next;
    }
    Ok(pairs)
}

/// Williamson decomposition `V = S D S^T` of a positive-definite covariance
/// matrix, with deterministic tie-breaking inside degenerate clusters.
///
/// Uses the antisymmetric canonical form of `M^{-1} Omega M^{-1}` with
/// `M = V^{1/2}`: an orthogonal `K` with `K^T (M^{-1} Omega M^{-1}) K` in
/// canonical block form yields `S = M K D^{-1/2}`.
pub fn williamson(v: &DMatrix<f64>, tol: &Tolerances) -> Result<WilliamsonResult, SympError> {
    let eig = spd_eigen(v, tol)?;
    let dim = v.nrows();
    let n = dim / 2;
    let m_sqrt = apply_to_eigenvalues(&eig, f64::sqrt);
    let m_inv_sqrt = apply_to_eigenvalues(&eig, |x| 1.0 / x.sqrt());
    let om = omega(n)?;
    let a_bar = &m_inv_sqrt * &om * &m_inv_sqrt;
    let b_bar = a_bar.transpose() * &a_bar;

    let eig_b = SymmetricEigen::new(b_bar);
    // mu = 1/d^2, so ascending mu gives descending d.
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        eig_b.eigenvalues[i]
            .partial_cmp(&eig_b.eigenvalues[j])
            .expect("finite")
    });
    let mu_sorted: Vec<f64> = order.iter().map(|&i| eig_b.eigenvalues[i]).collect();

    let mut d = Vec::with_capacity(n);
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(dim);
    for (lo, hi) in cluster_sorted(&mu_sorted, tol.pair) {
        let len = hi - lo;
        let mean = mu_sorted[lo..hi].iter().sum::<f64>() / len as f64;
        if mean <= 0.0 {
            return Err(SympError::PairingFailure {
                detail: format!("non-positive squared symplectic eigenvalue {mean:.6e}"),
            });
        }
        let d_cluster = 1.0 / mean.sqrt();
        let basis: Vec<DVector<f64>> = (lo..hi)
            .map(|k| eig_b.eigenvectors.column(order[k]).into_owned())
            .collect();
        for (u, w) in extract_pairs(&a_bar, basis, d_cluster)? {
            columns.push(u);
            columns.push(w);
            }
        for _ in 0..len / 2 {
            d.push(d_cluster);
        }
    }

    let min_d = d.iter().copied().fold(f64::INFINITY, f64::min);
    if min_d < 1.0 - tol.symp {
        return Err(SympError::BelowVacuum {
            min_d,
            tol: tol.symp,
        });
    }

    let mut k = DMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        k.set_column(j, col);
    }
    let d_inv_sqrt = DMatrix::from_diagonal(&DVector::from_iterator(
        dim,
        d.iter().flat_map(|&di| {
            let r = 1.0 / di.sqrt();
            [r, r]
        }),
    ));
    let s = m_sqrt * k * d_inv_sqrt;
    let s = SympMatrix::new(s, tol)?;

    let result = WilliamsonResult { s, d };
    let defect = (result.reconstruct() - v).amax();
    let scale = v.amax().max(1.0);
    if defect > tol.recon * scale {
        return Err(SympError::Reconstruction {
            defect,
            tol: tol.recon * scale,
        });
    }
    Ok(result)
}
