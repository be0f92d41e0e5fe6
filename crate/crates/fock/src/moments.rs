//! First and second quadrature moments of truncated states by sparse
//! ladder-operator contraction.

use nalgebra::{DMatrix, DVector};
use symplectic_core::C64;

use gaussian::GaussianMoments;

use crate::error::FockError;
use crate::state::FockState;

/// Ladder expectation values `<a_j>`, `<a_j a_k>`, and `<a_j^dag a_k>`.
pub(crate) struct LadderMoments {
    pub e1: DVector<C64>,
    pub e2: DMatrix<C64>,
    pub e11: DMatrix<C64>,
}

pub(crate) fn ladder_moments(st: &FockState) -> LadderMoments {
    let n = st.n_modes();
    let mut e1 = DVector::from_element(n, C64::new(0.0, 0.0));
    let mut e2 = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    let mut e11 = DMatrix::from_element(n, n, C64::new(0.0, 0.0));

    st.for_each(|t, amp| {
        let mut shifted = t.to_vec();
        for j in 0..n {
            // <a_j>: pairs amp(t) with amp(t - e_j).
            if t[j] > 0 {
                shifted[j] -= 1;
                let bra = st.amplitude(&shifted);
                e1[j] += bra.conj() * amp * C64::new((t[j] as f64).sqrt(), 0.0);
                shifted[j] += 1;
            }
            for k in 0..n {
                // <a_j a_k>: remove one photon from k then one from j.
                let tk = t[k] as usize;
                if tk > 0 {
                    shifted[k] -= 1;
                    let tj = shifted[j] as usize;
                    if tj > 0 {
                        shifted[j] -= 1;
                        let bra = st.amplitude(&shifted);
                        e2[(j, k)] +=
                            bra.conj() * amp * C64::new(((tk * tj) as f64).sqrt(), 0.0);
                        shifted[j] += 1;
                    }
                    // <a_j^dag a_k>: remove from k, add to j.
                    let tj_up = shifted[j] as usize + 1;
                    shifted[j] += 1;
                    if crate::basis::total(&shifted) <= st.cutoff() {
                        let bra = st.amplitude(&shifted);
                        e11[(j, k)] +=
                            bra.conj() * amp * C64::new(((tk * tj_up) as f64).sqrt(), 0.0);
                    }
                    shifted[j] -= 1;
                    shifted[k] += 1;
                }
            }
        }
    });

    LadderMoments { e1, e2, e11 }
}

/// Assembles quadrature mean and covariance from ladder expectations scaled
/// by `scale` (the inverse norm-square or inverse trace).
pub(crate) fn assemble_moments(lm: &LadderMoments, scale: f64) -> GaussianMoments {
    let n = lm.e1.len();
    let mut m = DVector::zeros(2 * n);
    for j in 0..n {
        m[2 * j] = 2f64.sqrt() * lm.e1[j].re * scale;
        m[2 * j + 1] = 2f64.sqrt() * lm.e1[j].im * scale;
    }

    let mut v = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let e2 = lm.e2[(j, k)] * scale;
            let e11 = lm.e11[(j, k)] * scale;
            let delta = if j == k { 1.0 } else { 0.0 };
            v[(2 * j, 2 * k)] = 2.0 * (e2.re + e11.re) + delta - 2.0 * m[2 * j] * m[2 * k];
            v[(2 * j + 1, 2 * k + 1)] =
                2.0 * (e11.re - e2.re) + delta - 2.0 * m[2 * j + 1] * m[2 * k + 1];
            v[(2 * j, 2 * k + 1)] = 2.0 * (e2.im + e11.im) - 2.0 * m[2 * j] * m[2 * k + 1];
        }
    }
    // The x-p cross entries determine the p-x ones by symmetry of the
    // anticommutator.
    for j in 0..n {
        for k in 0..n {
            v[(2 * j + 1, 2 * k)] = v[(2 * k, 2 * j + 1)];
        }
    }
    let v = (&v + v.transpose()) * 0.5;
    GaussianMoments::new_unchecked(m, v)
}

/// Quadrature mean and covariance (anticommutator convention, interleaved
/// ordering) of a normalized state.
pub fn moments(st: &FockState) -> Result<GaussianMoments, FockError> {
    let norm2 = st.norm_sqr();
    if norm2 < 1e-150 {
        return Err(FockError::ZeroNormState);
    }
    let lm = ladder_moments(st);
    Ok(assemble_moments(&lm, 1.0 / norm2))
}

/// Mean photon number `<sum_j a_j^dag a_j>` of a normalized state.
pub fn mean_photon_number(st: &FockState) -> f64 {
    let norm2 = st.norm_sqr();
    let mut acc = 0.0;
    st.for_each(|t, amp| {
        acc += crate::basis::total(t) as f64 * amp.norm_sqr();
    });
    acc / norm2
}
