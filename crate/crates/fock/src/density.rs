//! Dense density operators over the truncated basis: mixtures, partial
//! traces, trace distance, and logarithmic negativity.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use symplectic_core::{hermitian_eigenvalues, Tolerances, C64};

use gaussian::GaussianMoments;

use crate::basis::{total, FockBasis};
use crate::error::FockError;
use crate::moments::{assemble_moments, LadderMoments};
use crate::state::FockState;

/// Validation tolerance for traces and mixture weights.
const NORM_TOL: f64 = 1e-9;

/// A density operator stored densely over the total-photon truncated basis.
#[derive(Clone, Debug)]
pub struct DensityOp {
    n_modes: usize,
    cutoff: usize,
    basis: Arc<FockBasis>,
    mat: DMatrix<C64>,
}

impl DensityOp {
    /// The projector `|psi><psi|` onto a (renormalized) pure state.
    pub fn from_pure(st: &FockState) -> Result<Self, FockError> {
        Self::mixture(&[(1.0, st.clone())])
    }

    /// The convex mixture `sum_i p_i |psi_i><psi_i|`; weights must be
    /// nonnegative and sum to one. States may carry different cutoffs; the
    /// operator lives at the largest one.
    pub fn mixture(parts: &[(f64, FockState)]) -> Result<Self, FockError> {
        if parts.is_empty() {
            return Err(FockError::InvalidMixture {
                detail: "empty mixture".into(),
            });
        }
        let n_modes = parts[0].1.n_modes();
        let mut weight_sum = 0.0;
        let mut cutoff = 0;
        for (p, st) in parts {
            if st.n_modes() != n_modes {
                return Err(FockError::DimensionMismatch {
                    expected: n_modes,
                    got: st.n_modes(),
                });
            }
            if *p < -NORM_TOL {
                return Err(FockError::InvalidMixture {
                    detail: format!("negative weight {p}"),
                });
            }
            weight_sum += p;
            cutoff = cutoff.max(st.cutoff());
        }
        if (weight_sum - 1.0).abs() > NORM_TOL {
            return Err(FockError::InvalidMixture {
                detail: format!("weights sum to {weight_sum}, expected 1"),
            });
        }

        let basis = FockBasis::new(n_modes, cutoff);
        let dim = basis.len();
        let mut mat = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
        for (p, st) in parts {
            if *p <= 0.0 {
                continue;
            }
            let mut vec = DVector::from_element(dim, C64::new(0.0, 0.0));
            st.for_each(|t, amp| {
                vec[basis.index_of(t).expect("tuple within promoted cutoff")] = amp;
            });
            let norm = vec.norm();
            if norm < 1e-150 {
                return Err(FockError::ZeroNormState);
            }
            vec /= C64::new(norm, 0.0);
            let scaled = &vec * C64::new(*p, 0.0);
            // rho += p |v><v| without forming the adjoint matrix.
            for (j, vj) in vec.iter().enumerate() {
                if vj.norm_sqr() == 0.0 {
                    continue;
                }
                let col = vj.conj();
                for (i, si) in scaled.iter().enumerate() {
                    mat[(i, j)] += si * col;
                }
            }
        }
        Ok(Self {
            n_modes,
            cutoff,
            basis,
            mat,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// The trace (real part; the imaginary part of a valid operator's trace
    /// is zero).
    pub fn trace(&self) -> f64 {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Purity `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Eigenvalues of the operator, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, FockError> {
        Ok(hermitian_eigenvalues(&self.mat, &Tolerances::default())?)
    }

    /// Fidelity `<psi|rho|psi>` against a normalized pure state.
    pub fn fidelity_with_pure(&self, psi: &FockState) -> Result<f64, FockError> {
        if psi.n_modes() != self.n_modes {
            return Err(FockError::DimensionMismatch {
                expected: self.n_modes,
                got: psi.n_modes(),
            });
        }
        let norm2 = psi.norm_sqr();
        if norm2 < 1e-150 {
            return Err(FockError::ZeroNormState);
        }
        let dim = self.basis.len();
        let mut vec = DVector::from_element(dim, C64::new(0.0, 0.0));
        psi.for_each(|t, amp| {
            if let Some(i) = self.basis.index_of(t) {
                vec[i] = amp;
            }
        });
        let rho_v = &self.mat * &vec;
        Ok((vec.dotc(&rho_v).re / norm2).max(0.0))
    }

    /// Partial trace keeping the listed modes (sorted, distinct).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOp, FockError> {
        let n = self.n_modes;
        let mut seen = vec![false; n];
        for &m in keep {
            if m >= n {
                return Err(FockError::ModeOutOfRange { mode: m, n_modes: n });
            }
            if seen[m] {
                return Err(FockError::InvalidMixture {
                    detail: format!("mode {m} listed twice in partial trace"),
                });
            }
            seen[m] = true;
        }
        if keep.is_empty() {
            return Err(FockError::InvalidMixture {
                detail: "partial trace must keep at least one mode".into(),
            });
        }
        let env: Vec<usize> = (0..n).filter(|j| !seen[*j]).collect();
        let out_basis = FockBasis::new(keep.len(), self.cutoff);
        let mut out =
            DMatrix::from_element(out_basis.len(), out_basis.len(), C64::new(0.0, 0.0));

        // Group full-basis indices by their environment tuple; only equal
        // environment tuples pair up under the trace.
        let mut groups: HashMap<Vec<u16>, Vec<(usize, usize)>> = HashMap::new();
        for (full_idx, t) in self.basis.tuples().iter().enumerate() {
            let env_t: Vec<u16> = env.iter().map(|&j| t[j]).collect();
            let kept_t: Vec<u16> = keep.iter().map(|&j| t[j]).collect();
            let kept_idx = out_basis.index_of(&kept_t).expect("kept tuple within cutoff");
            groups.entry(env_t).or_default().push((kept_idx, full_idx));
        }
        for members in groups.values() {
            for &(ki, fi) in members {
                for &(kj, fj) in members {
                    out[(ki, kj)] += self.mat[(fi, fj)];
                }
            }
        }
        Ok(DensityOp {
            n_modes: keep.len(),
            cutoff: self.cutoff,
            basis: out_basis,
            mat: out,
        })
    }

    /// Logarithmic negativity `ln ||rho^{T_A}||_1` across the bipartition
    /// (`party`, rest). The partial transpose is assembled on the product of
    /// per-party truncated bases, which contains every transposed tuple.
    pub fn log_negativity(&self, party: &[usize]) -> Result<f64, FockError> {
        let n = self.n_modes;
        let mut seen = vec![false; n];
        for &m in party {
            if m >= n {
                return Err(FockError::ModeOutOfRange { mode: m, n_modes: n });
            }
            if seen[m] {
                return Err(FockError::InvalidMixture {
                    detail: format!("mode {m} listed twice in bipartition"),
                });
            }
            seen[m] = true;
        }
        if party.is_empty() || party.len() == n {
            return Err(FockError::InvalidMixture {
                detail: "bipartition must be proper".into(),
            });
        }
        let rest: Vec<usize> = (0..n).filter(|j| !seen[*j]).collect();
        let basis_a = FockBasis::new(party.len(), self.cutoff);
        let basis_b = FockBasis::new(rest.len(), self.cutoff);
        let (da, db) = (basis_a.len(), basis_b.len());
        let mut pt = DMatrix::from_element(da * db, da * db, C64::new(0.0, 0.0));

        let split = |t: &[u16]| -> (usize, usize) {
            let ta: Vec<u16> = party.iter().map(|&j| t[j]).collect();
            let tb: Vec<u16> = rest.iter().map(|&j| t[j]).collect();
            (
                basis_a.index_of(&ta).expect("party tuple within cutoff"),
                basis_b.index_of(&tb).expect("rest tuple within cutoff"),
            )
        };
        let tuples = self.basis.tuples();
        let splits: Vec<(usize, usize)> = tuples.iter().map(|t| split(t)).collect();
        for (i, &(ra, rb)) in splits.iter().enumerate() {
            for (j, &(ca, cb)) in splits.iter().enumerate() {
                let val = self.mat[(i, j)];
                if val.norm_sqr() == 0.0 {
                    continue;
                }
                // Transposing party A swaps its row and column tuples.
                pt[(ca * db + rb, ra * db + cb)] += val;
            }
        }
        let vals = hermitian_eigenvalues(&pt, &Tolerances::default())?;
        let trace_norm: f64 = vals.iter().map(|v| v.abs()).sum();
        Ok(trace_norm.max(1e-300).ln().max(0.0))
    }

    /// Quadrature mean and covariance via trace contractions.
    pub fn moments(&self) -> Result<GaussianMoments, FockError> {
        let tr = self.trace();
        if tr < 1e-150 {
            return Err(FockError::ZeroNormState);
        }
        let n = self.n_modes;
        let mut e1 = DVector::from_element(n, C64::new(0.0, 0.0));
        let mut e2 = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
        let mut e11 = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
        let tuples = self.basis.tuples();
        for (row, t) in tuples.iter().enumerate() {
            let mut shifted = t.clone();
            for j in 0..n {
                // tr(rho a_j) pairs row t with column t - e_j.
                if t[j] > 0 {
                    shifted[j] -= 1;
                    if let Some(col) = self.basis.index_of(&shifted) {
                        e1[j] += self.mat[(row, col)] * C64::new((t[j] as f64).sqrt(), 0.0);
                    }
                    shifted[j] += 1;
                }
                for k in 0..n {
                    let tk = t[k] as usize;
                    if tk == 0 {
                        continue;
                    }
                    shifted[k] -= 1;
                    let tj = shifted[j] as usize;
                    if tj > 0 {
                        shifted[j] -= 1;
                        if let Some(col) = self.basis.index_of(&shifted) {
                            e2[(j, k)] += self.mat[(row, col)]
                                * C64::new(((tk * tj) as f64).sqrt(), 0.0);
                        }
                        shifted[j] += 1;
                    }
                    let tj_up = shifted[j] as usize + 1;
                    shifted[j] += 1;
                    if total(&shifted) <= self.cutoff {
                        if let Some(col) = self.basis.index_of(&shifted) {
                            e11[(j, k)] += self.mat[(row, col)]
                                * C64::new(((tk * tj_up) as f64).sqrt(), 0.0);
                        }
                    }
                    shifted[j] -= 1;
                    shifted[k] += 1;
                }
            }
        }
        let lm = LadderMoments { e1, e2, e11 };
        Ok(assemble_moments(&lm, 1.0 / tr))
    }
}

/// Half the trace norm of `rho - sigma`; 0 for equal states, 1 for
/// orthogonal ones.
pub fn trace_distance(rho: &DensityOp, sigma: &DensityOp) -> Result<f64, FockError> {
    if rho.n_modes != sigma.n_modes {
        return Err(FockError::DimensionMismatch {
            expected: rho.n_modes,
            got: sigma.n_modes,
        });
    }
    let cutoff = rho.cutoff.max(sigma.cutoff);
    let basis = FockBasis::new(rho.n_modes, cutoff);
    let dim = basis.len();
    let mut diff = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let embed = |src: &DensityOp, sign: f64, dst: &mut DMatrix<C64>| {
        let map: Vec<usize> = src
            .basis
            .tuples()
            .iter()
            .map(|t| basis.index_of(t).expect("tuple within promoted cutoff"))
            .collect();
        for (i, &bi) in map.iter().enumerate() {
            for (j, &bj) in map.iter().enumerate() {
                dst[(bi, bj)] += src.mat[(i, j)] * C64::new(sign, 0.0);
            }
        }
    };
    embed(rho, 1.0, &mut diff);
    embed(sigma, -1.0, &mut diff);
    let vals = hermitian_eigenvalues(&diff, &Tolerances::default())?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}
