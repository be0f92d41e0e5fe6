//! Coherent-state projections: heterodyne post-selection and Husimi
//! phase-space densities.

use std::collections::HashMap;

use symplectic_core::C64;

use crate::error::FockError;
use crate::state::FockState;

/// Result of projecting a subset of modes onto coherent states.
pub struct HeterodyneOutcome {
    /// Renormalized state of the remaining modes; `None` when every mode was
    /// measured or the projection annihilates the state.
    pub post_state: Option<FockState>,
    /// Outcome probability density `||<alpha|psi>||^2 / pi^m` for `m`
    /// measured modes.
    pub prob_density: f64,
}

/// Coherent-state overlaps `<alpha|k> = e^{-|alpha|^2/2} conj(alpha)^k / sqrt(k!)`
/// for `k = 0..=k_max`.
fn coherent_bra(alpha: C64, k_max: usize) -> Vec<C64> {
    let mut row = Vec::with_capacity(k_max + 1);
    let mut cur = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    row.push(cur);
    let ac = alpha.conj();
    for k in 1..=k_max {
        cur *= ac / C64::new((k as f64).sqrt(), 0.0);
        row.push(cur);
    }
    row
}

/// Projects the listed modes of `st` onto the coherent states `alpha`,
/// returning the renormalized post-selected state of the remaining modes and
/// the heterodyne probability density of the outcome.
pub fn heterodyne_project(
    st: &FockState,
    alpha: &[C64],
    modes: &[usize],
) -> Result<HeterodyneOutcome, FockError> {
    let n = st.n_modes();
    if alpha.len() != modes.len() {
        return Err(FockError::DimensionMismatch {
            expected: modes.len(),
            got: alpha.len(),
        });
    }
    let mut seen = vec![false; n];
    for &m in modes {
        if m >= n {
            return Err(FockError::ModeOutOfRange { mode: m, n_modes: n });
        }
        if seen[m] {
            return Err(FockError::InvalidGate {
                detail: format!("mode {m} listed twice in heterodyne projection"),
            });
        }
        seen[m] = true;
    }

    let mut bra_rows: Vec<(usize, Vec<C64>)> = Vec::with_capacity(modes.len());
    for (&m, &a) in modes.iter().zip(alpha) {
        bra_rows.push((m, coherent_bra(a, st.cutoff())));
    }
    let kept: Vec<usize> = (0..n).filter(|j| !seen[*j]).collect();

    let mut projected: HashMap<Vec<u16>, C64> = HashMap::new();
    st.for_each(|t, amp| {
        let mut weight = amp;
        for (m, row) in &bra_rows {
            weight *= row[t[*m] as usize];
        }
        let rest: Vec<u16> = kept.iter().map(|&j| t[j]).collect();
        *projected.entry(rest).or_insert(C64::new(0.0, 0.0)) += weight;
    });

    let norm_sqr: f64 = projected.values().map(|c| c.norm_sqr()).sum();
    let prob_density = norm_sqr / std::f64::consts::PI.powi(modes.len() as i32);

    if kept.is_empty() || norm_sqr < 1e-300 {
        return Ok(HeterodyneOutcome {
            post_state: None,
            prob_density,
        });
    }
    let scale = C64::new(1.0 / norm_sqr.sqrt(), 0.0);
    for c in projected.values_mut() {
        *c *= scale;
    }
    let post = FockState::from_amplitudes(kept.len(), st.cutoff(), projected)?;
    Ok(HeterodyneOutcome {
        post_state: Some(post),
        prob_density,
    })
}

/// Husimi density `Q(alpha) = |<alpha|psi>|^2 / pi^n` of a normalized state.
pub fn husimi_density(st: &FockState, alpha: &[C64]) -> Result<f64, FockError> {
    let n = st.n_modes();
    if alpha.len() != n {
        return Err(FockError::DimensionMismatch {
            expected: n,
            got: alpha.len(),
        });
    }
    let modes: Vec<usize> = (0..n).collect();
    let outcome = heterodyne_project(st, alpha, &modes)?;
    Ok(outcome.prob_density)
}
