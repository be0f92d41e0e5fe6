//! Core value types: Gaussian unitary descriptors and Gaussian moments.

use nalgebra::{DMatrix, DVector};
use symplectic_core::{omega, SympMatrix, Tolerances};

use crate::error::GaussianError;

/// A Gaussian unitary in real notation: the pair `(S, r)` acting on moments
/// as `m -> S m + r`, `V -> S V S^T`.
///
/// As an operator this is `D_r U_S` (linear part first, then displacement);
/// the Heisenberg action on the quadrature vector is `G^dagger R G = S R + r`.
/// Composition follows the operator product: if `G = G_2 G_1` (apply `G_1`
/// first), then `(S, r) = (S_2 S_1, S_2 r_1 + r_2)`.
#[derive(Clone, Debug)]
pub struct GaussianUnitaryDesc {
    s: SympMatrix,
    r: DVector<f64>,
}

impl GaussianUnitaryDesc {
    pub fn new(s: SympMatrix, r: DVector<f64>) -> Result<Self, GaussianError> {
        if r.len() != s.dim() {
            return Err(GaussianError::DimensionMismatch {
                expected: s.dim(),
                got: r.len(),
            });
        }
        Ok(Self { s, r })
    }

    pub fn identity(n_modes: usize) -> Self {
        Self {
            s: SympMatrix::identity(n_modes),
            r: DVector::zeros(2 * n_modes),
        }
    }

    /// Purely linear Gaussian unitary (zero displacement).
    pub fn from_symplectic(s: SympMatrix) -> Self {
        let dim = s.dim();
        Self {
            s,
            r: DVector::zeros(dim),
        }
    }

    /// Pure displacement by the quadrature vector `r`.
    pub fn displacement(r: DVector<f64>) -> Result<Self, GaussianError> {
        if r.len() % 2 != 0 || r.is_empty() {
            return Err(GaussianError::DimensionMismatch {
                expected: r.len() + r.len() % 2,
                got: r.len(),
            });
        }
        let n = r.len() / 2;
        Ok(Self {
            s: SympMatrix::identity(n),
            r,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.s.n_modes()
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn s(&self) -> &SympMatrix {
        &self.s
    }

    pub fn r(&self) -> &DVector<f64> {
        &self.r
    }

    /// Operator product `self . first` (apply `first`, then `self`).
    pub fn compose(&self, first: &Self) -> Result<Self, GaussianError> {
        if self.dim() != first.dim() {
            return Err(GaussianError::DimensionMismatch {
                expected: self.dim(),
                got: first.dim(),
            });
        }
        let s = self.s.compose(&first.s);
        let r = self.s.as_matrix() * &first.r + &self.r;
        Ok(Self { s, r })
    }

    /// Inverse unitary: `(S^{-1}, -S^{-1} r)`.
    pub fn inverse(&self) -> Self {
        let s_inv = self.s.inverse();
        let r = -(s_inv.as_matrix() * &self.r);
        Self { s: s_inv, r }
    }

    /// Direct sum with `other` acting on the following modes.
    pub fn tensor(&self, other: &Self) -> Self {
        let (da, db) = (self.dim(), other.dim());
        let mut r = DVector::zeros(da + db);
        r.rows_mut(0, da).copy_from(&self.r);
        r.rows_mut(da, db).copy_from(&other.r);
        Self {
            s: self.s.direct_sum(&other.s),
            r,
        }
    }

    /// Embeds this unitary into `total_modes` modes, acting on the contiguous
    /// block of modes starting at `offset_modes`, identity elsewhere.
    pub fn embed(&self, offset_modes: usize, total_modes: usize) -> Result<Self, GaussianError> {
        let n = self.n_modes();
        if offset_modes + n > total_modes {
            return Err(GaussianError::ModeOutOfRange {
                mode: offset_modes + n,
                n_modes: total_modes,
            });
        }
        let s = self
            .s
            .embed(offset_modes, total_modes)
            .expect("range checked above");
        let mut r = DVector::zeros(2 * total_modes);
        r.rows_mut(2 * offset_modes, 2 * n).copy_from(&self.r);
        Ok(Self { s, r })
    }

    /// True when the linear part is orthogonal and the displacement vanishes,
    /// i.e. the unitary is passive (photon-number preserving).
    pub fn is_passive(&self, tol: f64) -> bool {
        self.s.orthogonality_defect() <= tol && self.r.amax() <= tol
    }
}

/// First and second moments `(m, V)` of a state over `n` modes, in the
/// anticommutator convention where the vacuum has `V = I`.
#[derive(Clone, Debug)]
pub struct GaussianMoments {
    m: DVector<f64>,
    v: DMatrix<f64>,
}

impl GaussianMoments {
    /// Validates symmetry and the uncertainty relation `V + i Omega >= 0`
    /// (within `tol.symp`, relative to the magnitude of `V`).
    pub fn new(m: DVector<f64>, v: DMatrix<f64>, tol: &Tolerances) -> Result<Self, GaussianError> {
        let dim = v.nrows();
        if v.ncols() != dim || dim % 2 != 0 || dim == 0 {
            return Err(GaussianError::DimensionMismatch {
                expected: dim + dim % 2,
                got: v.ncols(),
            });
        }
        if m.len() != dim {
            return Err(GaussianError::DimensionMismatch {
                expected: dim,
                got: m.len(),
            });
        }
        let scale = v.amax().max(1.0);
        let sym_defect = (&v - v.transpose()).amax();
        if sym_defect > tol.symp * scale {
            return Err(symplectic_core::SympError::NotSymmetric {
                defect: sym_defect,
                tol: tol.symp * scale,
            }
            .into());
        }
        let st = Self::new_unchecked(m, (&v + v.transpose()) * 0.5);
        let defect = st.uncertainty_defect();
        if defect > tol.symp * scale {
            return Err(GaussianError::UncertaintyViolated { min_eig: -defect });
        }
        Ok(st)
    }

    pub fn new_unchecked(m: DVector<f64>, v: DMatrix<f64>) -> Self {
        Self { m, v }
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            m: DVector::zeros(2 * n_modes),
            v: DMatrix::identity(2 * n_modes, 2 * n_modes),
        }
    }

    /// Product of thermal states with occupations `nu` (vacuum at zero).
    pub fn thermal(nu: &[f64]) -> Self {
        let n = nu.len();
        let diag = DVector::from_iterator(
            2 * n,
            nu.iter().flat_map(|&x| {
                let d = 2.0 * x + 1.0;
                [d, d]
            }),
        );
        Self {
            m: DVector::zeros(2 * n),
            v: DMatrix::from_diagonal(&diag),
        }
    }

    pub fn n_modes(&self) -> usize {
        self.v.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.v.nrows()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.m
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.v
    }

    /// How far `V + i Omega >= 0` is violated: `max(0, -lambda_min)`,
    /// computed through the real embedding of the Hermitian matrix.
    pub fn uncertainty_defect(&self) -> f64 {
        let dim = self.dim();
        let om = omega(dim / 2).expect("validated dimension");
        // H = V + i*Omega embeds as [[V, -Omega], [Omega, V]].
        let mut emb = DMatrix::zeros(2 * dim, 2 * dim);
        emb.view_mut((0, 0), (dim, dim)).copy_from(&self.v);
        emb.view_mut((dim, dim), (dim, dim)).copy_from(&self.v);
        emb.view_mut((0, dim), (dim, dim)).copy_from(&(-&om));
        emb.view_mut((dim, 0), (dim, dim)).copy_from(&om);
        let emb = (&emb + emb.transpose()) * 0.5;
        let eig = emb.symmetric_eigen();
        let min = eig.eigenvalues.min();
        (-min).max(0.0)
    }

    /// Keeps only the listed modes (partial trace over the rest).
    pub fn reduce(&self, keep: &[usize]) -> Result<Self, GaussianError> {
        self.check_modes(keep)?;
        let quad: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let m = DVector::from_iterator(quad.len(), quad.iter().map(|&q| self.m[q]));
        let v = DMatrix::from_fn(quad.len(), quad.len(), |i, j| self.v[(quad[i], quad[j])]);
        Ok(Self { m, v })
    }

    /// Conditions on projecting the listed modes onto the vacuum (heterodyne
    /// detection with outcome zero), returning the state of the remaining
    /// modes. The conditional moments follow the Schur-complement update
    /// `V' = V_B - V_BA (V_A + I)^{-1} V_AB`,
    /// `m' = m_B - V_BA (V_A + I)^{-1} m_A`.
    pub fn condition_on_vacuum(&self, projected: &[usize]) -> Result<Self, GaussianError> {
        self.check_modes(projected)?;
        let n = self.n_modes();
        if projected.len() >= n {
            return Err(GaussianError::InvalidModeSet {
                detail: "cannot project every mode; at least one must remain".into(),
            });
        }
        let keep: Vec<usize> = (0..n).filter(|m| !projected.contains(m)).collect();
        let qa: Vec<usize> = projected.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let qb: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();

        let va = DMatrix::from_fn(qa.len(), qa.len(), |i, j| self.v[(qa[i], qa[j])]);
        let vb = DMatrix::from_fn(qb.len(), qb.len(), |i, j| self.v[(qb[i], qb[j])]);
        let vba = DMatrix::from_fn(qb.len(), qa.len(), |i, j| self.v[(qb[i], qa[j])]);
        let ma = DVector::from_iterator(qa.len(), qa.iter().map(|&q| self.m[q]));
        let mb = DVector::from_iterator(qb.len(), qb.iter().map(|&q| self.m[q]));

        let core = va + DMatrix::identity(qa.len(), qa.len());
        let chol = core
            .cholesky()
            .ok_or_else(|| GaussianError::InvalidModeSet {
                detail: "V_A + I is not positive definite".into(),
            })?;
        let solve_mat = chol.solve(&vba.transpose());
        let v = &vb - &vba * &solve_mat;
        let m = mb - &vba * chol.solve(&ma);
        Ok(Self {
            m,
            v: (&v + v.transpose()) * 0.5,
        })
    }

    fn check_modes(&self, modes: &[usize]) -> Result<(), GaussianError> {
        let n = self.n_modes();
        if modes.is_empty() {
            return Err(GaussianError::InvalidModeSet {
                detail: "empty mode list".into(),
            });
        }
        for (i, &m) in modes.iter().enumerate() {
            if m >= n {
                return Err(GaussianError::ModeOutOfRange { mode: m, n_modes: n });
            }
            if modes[..i].contains(&m) {
                return Err(GaussianError::InvalidModeSet {
                    detail: format!("mode {m} listed twice"),
                });
            }
        }
        Ok(())
    }
}
