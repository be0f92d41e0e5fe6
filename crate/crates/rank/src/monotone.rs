//! Randomized property harness for rank monotonicity under post-selected
//! Gaussian operations.
//!
//! The symplectic rank of a pure state never increases under: tensoring
//! with Gaussian states, Gaussian unitaries, heterodyne post-selection, and
//! partial trace over subsystems in product form (the pure-state-preserving
//! branch of the partial trace). The suite drives a state through a seeded
//! random sequence of these operations, recomputes the rank after every
//! step, and errors out with the full operation trail if the rank ever
//! increases — which indicates a tolerance failure or a bug, never expected
//! behavior.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use fock::{apply_gaussian, heterodyne_project, FockState, GateOptions};
use gaussian::{params_to_desc, GaussianParams, GaussianUnitaryDesc};
use symplectic_core::Tolerances;

use crate::error::RankError;
use crate::rank::{symplectic_rank_pure, DEFAULT_RANK_TOL};
use crate::util::unitary_from_generator;

/// Knobs for [`monotonicity_suite`].
#[derive(Clone, Debug)]
pub struct MonotonicityOptions {
    /// Number of random operations to apply.
    pub steps: usize,
    /// Rank threshold passed through to the eigenvalue count.
    pub tau_rank: f64,
    /// Tensor steps stop once the state reaches this many modes.
    pub max_modes: usize,
    /// Cutoff of freshly tensored Gaussian modes.
    pub tensor_cutoff: usize,
    /// Heterodyne outcomes are resampled up to this many times when the
    /// branch probability density is negligible.
    pub heterodyne_retries: usize,
    /// Smallest accepted heterodyne probability density.
    pub min_prob_density: f64,
    pub gate_options: GateOptions,
    pub tol: Tolerances,
}

impl Default for MonotonicityOptions {
    fn default() -> Self {
        Self {
            steps: 12,
            tau_rank: DEFAULT_RANK_TOL,
            max_modes: 3,
            tensor_cutoff: 6,
            heterodyne_retries: 8,
            min_prob_density: 1e-4,
            gate_options: GateOptions::default(),
            tol: Tolerances::default(),
        }
    }
}

/// One applied operation and the ranks around it.
#[derive(Clone, Debug)]
pub struct MonotonicityStep {
    pub description: String,
    pub rank_before: usize,
    pub rank_after: usize,
    pub n_modes_after: usize,
}

/// Outcome of a full random sequence.
#[derive(Clone, Debug)]
pub struct MonotonicityReport {
    pub initial_rank: usize,
    pub final_rank: usize,
    pub steps: Vec<MonotonicityStep>,
}

/// Tracks which modes are still in product form with the rest of the state,
/// storing the single-mode factor for exact extraction.
struct Tracked {
    state: FockState,
    fresh: Vec<Option<FockState>>,
}

/// Drops basis headroom the support no longer needs (lossless; keeps the
/// dense representation small across tensor-heavy sequences).
fn tighten(st: FockState) -> FockState {
    let mut max_total = 0usize;
    st.for_each(|tuple, _| {
        let total: usize = tuple.iter().map(|&t| t as usize).sum();
        max_total = max_total.max(total);
    });
    if max_total < st.cutoff() {
        st.with_cutoff(max_total)
    } else {
        st
    }
}

fn random_single_mode_gaussian(
    rng: &mut ChaCha12Rng,
    cutoff: usize,
    opts: &MonotonicityOptions,
) -> Result<(FockState, String), RankError> {
    let theta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    let xi = rng.gen_range(-0.4..0.4);
    let beta = C64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    let u = DMatrix::from_element(1, 1, C64::new(theta.cos(), theta.sin()));
    let params = GaussianParams::new(
        u.clone(),
        u.clone_owned(),
        DVector::from_element(1, xi),
        DVector::from_element(1, beta),
    )?;
    let desc = params_to_desc(&params, &opts.tol)?;
    let g = apply_gaussian(&FockState::vacuum(1, cutoff), &desc, &opts.gate_options)?.state;
    let label = format!("tensor gaussian mode (xi {xi:.2}, |beta| {:.2})", beta.norm());
    Ok((g, label))
}

fn random_global_unitary(
    rng: &mut ChaCha12Rng,
    n: usize,
    opts: &MonotonicityOptions,
) -> Result<GaussianUnitaryDesc, RankError> {
    let gen: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-0.6..0.6)).collect();
    let gen_v: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-0.6..0.6)).collect();
    let u = unitary_from_generator(&gen, n, &opts.tol)?;
    let v = unitary_from_generator(&gen_v, n, &opts.tol)?;
    let xi = DVector::from_iterator(n, (0..n).map(|_| rng.gen_range(-0.3..0.3)));
    let beta = DVector::from_iterator(
        n,
        (0..n).map(|_| C64::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4))),
    );
    let params = GaussianParams::new(u, v, xi, beta)?;
    Ok(params_to_desc(&params, &opts.tol)?)
}

/// Extracts the complement of a product-form mode: with
/// `state = chi (x)_j g`, returns `chi` and verifies the factorization to
/// within `1e-6` in norm.
fn extract_complement(
    tracked: &Tracked,
    mode: usize,
    factor: &FockState,
) -> Result<FockState, RankError> {
    let st = &tracked.state;
    let n = st.n_modes();

    // Reference occupation: the factor's heaviest component.
    let mut best_m = 0u16;
    let mut best_w = 0.0;
    factor.for_each(|tuple, amp| {
        if amp.norm_sqr() > best_w {
            best_w = amp.norm_sqr();
            best_m = tuple[0];
        }
    });
    if best_w == 0.0 {
        return Err(RankError::ProductExtraction {
            detail: format!("stored factor for mode {mode} has empty support"),
        });
    }
    let g_ref = factor.amplitude(&[best_m]);

    let mut chi_map = std::collections::HashMap::new();
    st.for_each(|tuple, amp| {
        if tuple[mode] == best_m {
            let mut reduced = Vec::with_capacity(n - 1);
            reduced.extend_from_slice(&tuple[..mode]);
            reduced.extend_from_slice(&tuple[mode + 1..]);
            chi_map.insert(reduced, amp / g_ref);
        }
    });
    let chi = FockState::from_amplitudes(n - 1, st.cutoff(), chi_map)?.normalized()?;

    // Verify || state - chi (x)_j g || is negligible before trusting the
    // branch: iterate the full support of the product and compare.
    let mut err2 = 0.0;
    let mut covered = std::collections::HashSet::new();
    st.for_each(|tuple, amp| {
        let mut reduced = Vec::with_capacity(n - 1);
        reduced.extend_from_slice(&tuple[..mode]);
        reduced.extend_from_slice(&tuple[mode + 1..]);
        let predicted = chi.amplitude(&reduced) * factor.amplitude(&[tuple[mode]]);
        err2 += (amp - predicted).norm_sqr();
        covered.insert(tuple.to_vec());
    });
    chi.for_each(|reduced, chi_amp| {
        factor.for_each(|m, g_amp| {
            let mut full = Vec::with_capacity(n);
            full.extend_from_slice(&reduced[..mode]);
            full.push(m[0]);
            full.extend_from_slice(&reduced[mode..]);
            if !covered.contains(&full) {
                err2 += (chi_amp * g_amp).norm_sqr();
            }
        });
    });
    if err2.sqrt() > 1e-6 {
        return Err(RankError::ProductExtraction {
            detail: format!(
                "mode {mode} is no longer in product form (defect {:.3e})",
                err2.sqrt()
            ),
        });
    }
    Ok(chi)
}

/// Runs a seeded random sequence of Gaussian operations on `st`, checking
/// after every step that the symplectic rank did not increase.
pub fn monotonicity_suite(
    st: &FockState,
    seed: u64,
    opts: &MonotonicityOptions,
) -> Result<MonotonicityReport, RankError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut tracked = Tracked {
        state: st.normalized()?,
        fresh: vec![None; st.n_modes()],
    };
    let initial_rank = symplectic_rank_pure(&tracked.state, opts.tau_rank)?;
    let mut rank = initial_rank;
    let mut steps: Vec<MonotonicityStep> = Vec::with_capacity(opts.steps);

    for step_index in 0..opts.steps {
        let n = tracked.state.n_modes();
        let has_fresh = tracked.fresh.iter().any(Option::is_some);
        // Menu: 0 tensor, 1 unitary, 2 heterodyne, 3 partial trace; draws
        // whose precondition fails fall back to the always-available
        // Gaussian unitary.
        let choice = match rng.gen_range(0u8..4) {
            0 if n < opts.max_modes => 0,
            2 if n >= 2 => 2,
            3 if has_fresh => 3,
            _ => 1,
        };

        let description = match choice {
            0 => {
                let (g, label) = random_single_mode_gaussian(&mut rng, opts.tensor_cutoff, opts)?;
                tracked.state = tracked.state.tensor(&g);
                tracked.fresh.push(Some(g));
                label
            }
            2 => {
                let mode = rng.gen_range(0..n);
                let moments = fock::moments(&tracked.state)?;
                let center = C64::new(
                    moments.mean()[2 * mode] / std::f64::consts::SQRT_2,
                    moments.mean()[2 * mode + 1] / std::f64::consts::SQRT_2,
                );
                let mut applied = None;
                for _ in 0..opts.heterodyne_retries.max(1) {
                    let alpha = center
                        + C64::new(rng.gen_range(-0.6..0.6), rng.gen_range(-0.6..0.6));
                    let outcome = heterodyne_project(&tracked.state, &[alpha], &[mode])?;
                    if outcome.prob_density < opts.min_prob_density {
                        continue;
                    }
                    if let Some(post) = outcome.post_state {
                        applied = Some((post, alpha));
                        break;
                    }
                }
                match applied {
                    Some((post, alpha)) => {
                        tracked.state = tighten(post);
                        tracked.fresh.remove(mode);
                        format!("heterodyne mode {mode} at alpha {:.2}+{:.2}i", alpha.re, alpha.im)
                    }
                    None => {
                        // Every sampled outcome was negligible; skip rather
                        // than post-select on a numerically empty branch.
                        format!("heterodyne mode {mode} skipped (negligible outcomes)")
                    }
                }
            }
            3 => {
                let candidates: Vec<usize> = tracked
                    .fresh
                    .iter()
                    .enumerate()
                    .filter_map(|(i, f)| f.as_ref().map(|_| i))
                    .collect();
                let mode = candidates[rng.gen_range(0..candidates.len())];
                let factor = tracked.fresh[mode].clone().expect("candidate is fresh");
                let chi = extract_complement(&tracked, mode, &factor)?;
                tracked.state = tighten(chi);
                tracked.fresh.remove(mode);
                format!("partial trace over product mode {mode}")
            }
            _ => {
                let desc = random_global_unitary(&mut rng, n, opts)?;
                tracked.state = apply_gaussian(&tracked.state, &desc, &opts.gate_options)?.state;
                tracked.fresh = vec![None; n];
                format!("gaussian unitary on all {n} modes")
            }
        };

        let rank_after = symplectic_rank_pure(&tracked.state, opts.tau_rank)?;
        if rank_after > rank {
            let trail = steps.iter().map(|s| s.description.clone()).collect();
            return Err(RankError::MonotonicityViolation {
                step_index,
                description,
                rank_before: rank,
                rank_after,
                trail,
            });
        }
        steps.push(MonotonicityStep {
            description,
            rank_before: rank,
            rank_after,
            n_modes_after: tracked.state.n_modes(),
        });
        rank = rank_after;
    }

    Ok(MonotonicityReport {
        initial_rank,
        final_rank: rank,
        steps,
    })
}
