use nalgebra::{DMatrix, DVector};

use crate::error::SympError;
use crate::omega::{omega, omega_apply, omega_pairing};
use crate::tolerances::Tolerances;

/// Max-norm defect of the symplectic identity, `|| S Omega S^T - Omega ||_max`.
///
/// Fails early if the matrix is not square with even dimension.
pub fn symplectic_defect(m: &DMatrix<f64>) -> Result<f64, SympError> {
    check_even_square(m)?;
    let n = m.nrows() / 2;
    let om = omega(n)?;
    let defect = m * &om * m.transpose() - &om;
    Ok(defect.amax())
}

pub(crate) fn check_even_square(m: &DMatrix<f64>) -> Result<(), SympError> {
    if m.nrows() != m.ncols() {
        return Err(SympError::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() % 2 != 0 {
        return Err(SympError::OddDimension { dim: m.nrows() });
    }
    if m.nrows() == 0 {
        return Err(SympError::ZeroModes);
    }
    Ok(())
}

/// A validated real symplectic matrix: `S Omega S^T = Omega` within the
/// construction tolerance.
///
/// Inverses and transposes are computed through the symplectic identity
/// (`S^{-1} = Omega^T S^T Omega`), so they stay exactly within the group up
/// to roundoff and never require a linear solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SympMatrix {
    m: DMatrix<f64>,
}

impl SympMatrix {
    /// Validates `S Omega S^T = Omega` within `tol.symp` and wraps the matrix.
    pub fn new(m: DMatrix<f64>, tol: &Tolerances) -> Result<Self, SympError> {
        let defect = symplectic_defect(&m)?;
        if defect > tol.symp {
            return Err(SympError::SymplecticDefect {
                defect,
                tol: tol.symp,
            });
        }
        Ok(Self { m })
    }

    /// Wraps a matrix produced by an operation that preserves symplecticity
    /// exactly up to roundoff (group products, inverses, transposes).
    pub(crate) fn trusted(m: DMatrix<f64>) -> Self {
        Self { m }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            m: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Group product `self * rhs`.
    pub fn compose(&self, rhs: &SympMatrix) -> SympMatrix {
        SympMatrix::trusted(&self.m * &rhs.m)
    }

    /// `S^{-1} = Omega^T S^T Omega`, exact within the group.
    pub fn inverse(&self) -> SympMatrix {
        let n = self.n_modes();
        let om = omega(n).expect("validated matrix has at least one mode");
        SympMatrix::trusted(om.transpose() * self.m.transpose() * om)
    }

    /// The transpose of a symplectic matrix is symplectic.
    pub fn transpose(&self) -> SympMatrix {
        SympMatrix::trusted(self.m.transpose())
    }

    /// Maximum absolute deviation from orthogonality, `|| S^T S - I ||_max`.
    pub fn orthogonality_defect(&self) -> f64 {
        let dim = self.dim();
        (self.m.transpose() * &self.m - DMatrix::identity(dim, dim)).amax()
    }

    /// Block-diagonal direct sum; `other` acts on the modes following
    /// `self`'s. Exact within the group, so no re-validation is needed.
    pub fn direct_sum(&self, other: &SympMatrix) -> SympMatrix {
        let (da, db) = (self.dim(), other.dim());
        let mut m = DMatrix::zeros(da + db, da + db);
        m.view_mut((0, 0), (da, da)).copy_from(&self.m);
        m.view_mut((da, da), (db, db)).copy_from(&other.m);
        SympMatrix::trusted(m)
    }

    /// Embeds into `total_modes` modes, acting on the contiguous block of
    /// modes starting at `offset_modes` and as the identity elsewhere.
    pub fn embed(&self, offset_modes: usize, total_modes: usize) -> Result<SympMatrix, SympError> {
        let n = self.n_modes();
        if offset_modes + n > total_modes {
            return Err(SympError::DimensionMismatch {
                expected: total_modes,
                got: offset_modes + n,
            });
        }
        let mut m = DMatrix::identity(2 * total_modes, 2 * total_modes);
        m.view_mut((2 * offset_modes, 2 * offset_modes), (2 * n, 2 * n))
            .copy_from(&self.m);
        Ok(SympMatrix::trusted(m))
    }
}

/// Completes `k` conjugate row pairs to a full symplectic matrix.
///
/// `rows` is a `2k x 2n` matrix whose rows satisfy the canonical pairings
/// `r_{2i} Omega r_{2j}^T = delta_{ij}`, `r_{2i} Omega r_{2j}^T = 0` within
/// `tol.recon` (validated). The returned matrix is `2n x 2n`, symplectic
/// within `tol.symp`, and its first `2k` rows are exactly the inputs.
///
/// The completion extends with canonical basis vectors, projecting each
/// candidate into the symplectic complement of the rows collected so far and
/// pivoting on the largest residual so the result stays well conditioned.
pub fn complete_symplectic_rows(
    rows: &DMatrix<f64>,
    tol: &Tolerances,
) -> Result<SympMatrix, SympError> {
    let dim = rows.ncols();
    if dim % 2 != 0 || dim == 0 {
        return Err(SympError::OddDimension { dim });
    }
    if rows.nrows() % 2 != 0 || rows.nrows() > dim {
        return Err(SympError::BasisCompletion {
            detail: format!(
                "expected an even number of seed rows, at most {}, got {}",
                dim,
                rows.nrows()
            ),
        });
    }
    let n_pairs_seed = rows.nrows() / 2;
    let n_pairs_total = dim / 2;

    let mut pairs: Vec<(DVector<f64>, DVector<f64>)> = Vec::with_capacity(n_pairs_total);
    for i in 0..n_pairs_seed {
        let a = DVector::from_iterator(dim, rows.row(2 * i).iter().copied());
        let b = DVector::from_iterator(dim, rows.row(2 * i + 1).iter().copied());
        pairs.push((a, b));
    }

    // Validate the seed pairings.
    for i in 0..n_pairs_seed {
        for j in 0..n_pairs_seed {
            let want = if i == j { 1.0 } else { 0.0 };
            let p_aa = omega_pairing(&pairs[i].0, &pairs[j].0);
            let p_ab = omega_pairing(&pairs[i].0, &pairs[j].1);
            let p_bb = omega_pairing(&pairs[i].1, &pairs[j].1);
            let defect = p_aa.abs().max((p_ab - want).abs()).max(p_bb.abs());
            if defect > tol.recon {
                return Err(SympError::BasisCompletion {
                    detail: format!(
                        "seed rows are not canonically paired: defect {defect:.3e} at pair ({i}, {j})"
                    ),
                });
            }
        }
    }

    let project = |v: &DVector<f64>, pairs: &[(DVector<f64>, DVector<f64>)]| -> DVector<f64> {
        let mut w = v.clone();
        // Two passes of symplectic Gram-Schmidt for numerical stability.
        for _ in 0..2 {
            for (a, b) in pairs {
                let cb = omega_pairing(&w, b);
                let ca = omega_pairing(&w, a);
                w -= a * cb;
                w += b * ca;
            }
        }
        w
    };

    while pairs.len() < n_pairs_total {
        // First leg: canonical candidate with the largest symplectic residual.
        let mut best: Option<(f64, DVector<f64>)> = None;
        for k in 0..dim {
            let mut e = DVector::zeros(dim);
            e[k] = 1.0;
            let w = project(&e, &pairs);
            let norm = w.norm();
            if best.as_ref().map_or(true, |(bn, _)| norm > *bn) {
                best = Some((norm, w));
            }
        }
        let (norm_a, a_raw) = best.ok_or_else(|| SympError::BasisCompletion {
            detail: "no candidate direction left".to_string(),
        })?;
        if norm_a < 1e-8 {
            return Err(SympError::BasisCompletion {
                detail: format!("residual space collapsed (largest residual {norm_a:.3e})"),
            });
        }
        let a = &a_raw / norm_a;

        // Second leg: candidate with the largest pairing against the first leg.
        // `Omega a` always pairs to || a ||^2 = 1, so a good candidate exists.
        let omega_a = omega_apply(&a);
        let b_raw = project(&omega_a, &pairs);
        let c = omega_pairing(&a, &b_raw);
        if c.abs() < 1e-8 {
            return Err(SympError::BasisCompletion {
                detail: format!("could not find a conjugate partner (pairing {c:.3e})"),
            });
        }
        let b = &b_raw / c;
        pairs.push((a, b));
    }

    let mut out = DMatrix::zeros(dim, dim);
    for i in 0..n_pairs_seed {
        out.set_row(2 * i, &rows.row(2 * i));
        out.set_row(2 * i + 1, &rows.row(2 * i + 1));
    }
    for (i, (a, b)) in pairs.iter().enumerate().skip(n_pairs_seed) {
        out.set_row(2 * i, &a.transpose());
        out.set_row(2 * i + 1, &b.transpose());
    }
    SympMatrix::new(out, tol)
}
