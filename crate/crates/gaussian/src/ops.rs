//! Moment-level operations: unitary action, energy bookkeeping, normal-mode
//! decomposition, and moment-level entanglement diagnostics.

use nalgebra::{DMatrix, DVector};
use symplectic_core::{symplectic_eigenvalues, williamson, SympMatrix, Tolerances};

use crate::error::GaussianError;
use crate::types::{GaussianMoments, GaussianUnitaryDesc};

/// Applies a Gaussian unitary to moments: `m -> S m + r`, `V -> S V S^T`.
pub fn apply_to_moments(
    g: &GaussianUnitaryDesc,
    st: &GaussianMoments,
) -> Result<GaussianMoments, GaussianError> {
    if g.dim() != st.dim() {
        return Err(GaussianError::DimensionMismatch {
            expected: g.dim(),
            got: st.dim(),
        });
    }
    let s = g.s().as_matrix();
    let m = s * st.mean() + g.r();
    let v = s * st.covariance() * s.transpose();
    Ok(GaussianMoments::new_unchecked(m, (&v + v.transpose()) * 0.5))
}

/// Mean energy and mean photon number of a state with the given moments:
/// `E = tr V / 4 + ||m||^2 / 2` and `N = tr(V - I)/4 + ||m||^2 / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyPhoton {
    pub mean_energy: f64,
    pub mean_photon: f64,
}

pub fn energy_and_photon(st: &GaussianMoments) -> EnergyPhoton {
    let trace = st.covariance().trace();
    let shift = st.mean().norm_squared() / 2.0;
    EnergyPhoton {
        mean_energy: trace / 4.0 + shift,
        mean_photon: (trace - st.dim() as f64) / 4.0 + shift,
    }
}

/// Normal-mode form of a Gaussian state: a displacement, a symplectic matrix
/// and per-mode thermal occupations `nu_j = (d_j - 1) / 2`, so that
/// `V = S diag(2 nu + 1) S^T` and `m` is the displacement.
#[derive(Clone, Debug)]
pub struct NormalModes {
    pub displacement: DVector<f64>,
    pub s: SympMatrix,
    pub nu: Vec<f64>,
}

impl NormalModes {
    pub fn reconstruct(&self) -> GaussianMoments {
        let st = GaussianMoments::thermal(&self.nu);
        let s = self.s.as_matrix();
        let v = s * st.covariance() * s.transpose();
        GaussianMoments::new_unchecked(self.displacement.clone(), (&v + v.transpose()) * 0.5)
    }

    /// The Gaussian unitary `G` with `rho = G tau G^dagger` for the thermal
    /// product `tau`.
    pub fn as_unitary(&self) -> GaussianUnitaryDesc {
        GaussianUnitaryDesc::new(self.s.clone(), self.displacement.clone())
            .expect("dimensions agree by construction")
    }
}

pub fn normal_mode_decomposition(
    st: &GaussianMoments,
    tol: &Tolerances,
) -> Result<NormalModes, GaussianError> {
    let w = williamson(st.covariance(), tol)?;
    let nu = w.d.iter().map(|&d| (d - 1.0) / 2.0).collect();
    Ok(NormalModes {
        displacement: st.mean().clone(),
        s: w.s,
        nu,
    })
}

/// How far the state is from being pure: `max_i d_i - 1` over the symplectic
/// eigenvalues (zero for pure Gaussian states).
pub fn purity_defect(st: &GaussianMoments, tol: &Tolerances) -> Result<f64, GaussianError> {
    let d = symplectic_eigenvalues(st.covariance(), tol)?;
    Ok(d.iter().fold(0.0_f64, |acc, &x| acc.max(x - 1.0)))
}

/// Squared overlap `|<psi_1|psi_2>|^2` of two pure Gaussian states from
/// their moments:
/// `F = 2^n det(V_1 + V_2)^{-1/2} exp(-delta^T (V_1 + V_2)^{-1} delta)`
/// with `delta = m_1 - m_2`. Callers are responsible for purity; mixed
/// inputs make the formula meaningless.
pub fn pure_fidelity(a: &GaussianMoments, b: &GaussianMoments) -> Result<f64, GaussianError> {
    if a.dim() != b.dim() {
        return Err(GaussianError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let n = a.n_modes();
    let sum = a.covariance() + b.covariance();
    let delta = a.mean() - b.mean();
    let chol = sum.clone().cholesky().ok_or(GaussianError::Inconsistent {
        detail: "V_1 + V_2 is not positive definite".into(),
    })?;
    let quad = delta.dot(&chol.solve(&delta));
    Ok(2.0_f64.powi(n as i32) / chol.determinant().sqrt() * (-quad).exp())
}

/// Logarithmic negativity (natural logarithm) of a Gaussian state across the
/// bipartition `party_a` vs the rest, from the symplectic spectrum of the
/// partially transposed covariance matrix.
pub fn log_negativity(
    st: &GaussianMoments,
    party_a: &[usize],
    tol: &Tolerances,
) -> Result<f64, GaussianError> {
    let n = st.n_modes();
    for &m in party_a {
        if m >= n {
            return Err(GaussianError::ModeOutOfRange { mode: m, n_modes: n });
        }
    }
    // Partial transposition flips the momenta of one party.
    let mut p = DVector::from_element(2 * n, 1.0);
    for &m in party_a {
        p[2 * m + 1] = -1.0;
    }
    let pm = DMatrix::from_diagonal(&p);
    let v_pt = &pm * st.covariance() * pm;
    let d = symplectic_eigenvalues(&v_pt, tol)?;
    Ok(d.iter().map(|&di| (-di.ln()).max(0.0)).sum())
}
