//! Symplectic fidelities of pure states by optimization over Gaussian
//! unitaries.
//!
//! The `k`-symplectic fidelity of a pure state is the largest overlap it can
//! reach with any state whose symplectic rank is at most `k`. For pure
//! states this reduces to a search over Gaussian unitaries `G`: the value is
//! the squared weight of `G |psi>` on the sector where the last `n - k`
//! modes sit in the vacuum, maximized over `G`.
//!
//! `G` is searched in the factorized form `G_U S(xi) D(beta) G_V` (passive,
//! squeeze, displace, passive), with the two passive layers generated by
//! Hermitian matrices, so the parameter space is a plain real vector and a
//! derivative-free simplex search applies. Optimization returns **best
//! found** values only: every reported number is a certified lower bound on
//! the supremum (up to the reported truncation leak), never a claim that the
//! supremum is attained.
//!
//! One restart is seeded at the normal-form solution (invert the Gaussian
//! unitary recovered from the state's own moments). At that point the
//! covariance is diagonal with the excited modes sorted first, which is the
//! exact optimum whenever `k` is at least the symplectic rank; the search
//! can only improve from there.

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use fock::{apply_gaussian, apply_gaussian_seq, FockState, GateOptions};
use gaussian::{normal_mode_decomposition, params_to_desc, GaussianParams, GaussianUnitaryDesc};
use symplectic_core::Tolerances;

use crate::error::RankError;
use crate::nelder::{minimize, NmOptions, NmResult};
use crate::util::{squash, unitary_from_generator};

/// Objective value assigned to rejected probes (leak-budget blowups or
/// invalid descriptors); the true objective `1 - weight` lives in `[0, 1]`.
const PENALTY: f64 = 2.0;

/// Knobs for the multi-start simplex search.
#[derive(Clone, Debug)]
pub struct OptimizerConfig {
    /// Number of simplex runs. Two are deterministic (normal-form seed and
    /// identity seed); the rest start from random parameters.
    pub restarts: usize,
    /// Seed for the random restarts; fixed seed gives a fully deterministic
    /// result.
    pub seed: u64,
    /// Objective-evaluation cap per restart; `0` picks `250 * dim + 750`.
    pub max_evals_per_restart: usize,
    /// Simplex convergence thresholds (f-spread and vertex spread).
    pub ftol: f64,
    pub xtol: f64,
    /// Per-mode squeezing is squashed into `[-squeeze_box, squeeze_box]`.
    pub squeeze_box: f64,
    /// Each displacement component is squashed into
    /// `[-displacement_box, displacement_box]`.
    pub displacement_box: f64,
    /// Leak budget per objective evaluation; probes exceeding it are
    /// rejected, which keeps the search inside the numerically trustworthy
    /// region of the truncated basis.
    pub leak_budget: f64,
    /// Initial simplex offset per coordinate (raw parameter units).
    pub init_step: f64,
    /// Seed restart 0 at the normal-form solution derived from the state's
    /// moments.
    pub use_normal_form_start: bool,
    /// Numerical tolerances for the underlying decompositions.
    pub tol: Tolerances,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            seed: 7,
            max_evals_per_restart: 0,
            ftol: 1e-10,
            xtol: 1e-7,
            squeeze_box: 2.0,
            displacement_box: 4.0,
            leak_budget: 1e-6,
            init_step: 0.2,
            use_normal_form_start: true,
            tol: Tolerances::default(),
        }
    }
}

/// What the optimizer did, attached to every reported value.
#[derive(Clone, Debug)]
pub struct OptimizerDiagnostics {
    /// Objective evaluations summed over restarts.
    pub evaluations: usize,
    /// Restarts actually run.
    pub restarts: usize,
    /// Index of the winning restart (0 is the normal-form seed).
    pub best_restart: usize,
    /// Whether the winning restart met the simplex convergence thresholds
    /// before exhausting its evaluation budget.
    pub converged: bool,
    /// Truncation leak at the reported optimum; the value is trustworthy to
    /// about this resolution.
    pub leak: f64,
}

/// Best fidelity found for one `k`, with the Gaussian unitary realizing it.
#[derive(Clone, Debug)]
pub struct FidelityOutcome {
    /// Squared weight of `desc` applied to the input on the
    /// `anything (x) vacuum` sector (last `n - k` modes vacuum). A lower
    /// bound on the `k`-symplectic fidelity.
    pub value: f64,
    /// The Gaussian unitary realizing `value`: applying it to the input
    /// puts weight `value` on the vacuum sector of the last `n - k` modes.
    pub desc: GaussianUnitaryDesc,
    pub diagnostics: OptimizerDiagnostics,
}

/// One entry of a [`FidelityCurve`].
#[derive(Clone, Debug)]
pub struct FidelityPoint {
    pub k: usize,
    pub value: f64,
    pub desc: GaussianUnitaryDesc,
    pub diagnostics: OptimizerDiagnostics,
}

/// Best-found symplectic fidelities for every `k` from 0 to the mode count.
///
/// Each level is additionally seeded with the previous level's optimum,
/// whose objective can only grow when the projector widens, so the curve is
/// non-decreasing by construction.
#[derive(Clone, Debug)]
pub struct FidelityCurve {
    points: Vec<FidelityPoint>,
}

impl FidelityCurve {
    pub fn points(&self) -> &[FidelityPoint] {
        &self.points
    }

    /// Number of modes `n`; the curve holds `n + 1` points.
    pub fn n_modes(&self) -> usize {
        self.points.len() - 1
    }

    /// Best fidelity found at level `k`.
    pub fn value(&self, k: usize) -> Option<f64> {
        self.points.get(k).map(|p| p.value)
    }

    /// Largest drop between consecutive levels (non-positive when the curve
    /// is monotone, as it should be).
    pub fn max_decrease(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| w[0].value - w[1].value)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Smallest `k` whose fidelity reaches `1 - eps`.
    pub fn smallest_level_above(&self, threshold: f64) -> Option<usize> {
        self.points.iter().position(|p| p.value >= threshold)
    }
}

// ---------------------------------------------------------------------------
// Parameter vector <-> Gaussian unitary
// ---------------------------------------------------------------------------

/// Layout of the raw parameter vector for `n` modes:
/// `n^2` generator entries for the left passive, `n` squeezes, `2n`
/// displacement components, `n^2` generator entries for the right passive.
fn param_dim(n: usize) -> usize {
    2 * n * n + 3 * n
}

fn desc_from_params(
    x: &[f64],
    n: usize,
    cfg: &OptimizerConfig,
) -> Result<GaussianUnitaryDesc, RankError> {
    let (gen_u, rest) = x.split_at(n * n);
    let (xi_raw, rest) = rest.split_at(n);
    let (beta_raw, gen_v) = rest.split_at(2 * n);

    let u = unitary_from_generator(gen_u, n, &cfg.tol)?;
    let v = unitary_from_generator(gen_v, n, &cfg.tol)?;
    let xi = DVector::from_iterator(n, xi_raw.iter().map(|&r| squash(r, cfg.squeeze_box)));
    let beta = DVector::from_iterator(
        n,
        (0..n).map(|j| {
            C64::new(
                squash(beta_raw[2 * j], cfg.displacement_box),
                squash(beta_raw[2 * j + 1], cfg.displacement_box),
            )
        }),
    );
    let params = GaussianParams::new(u, v, xi, beta)?;
    Ok(params_to_desc(&params, &cfg.tol)?)
}

// ---------------------------------------------------------------------------
// Objective
// ---------------------------------------------------------------------------

/// Squared weight of the state on tuples whose occupation vanishes on modes
/// `k..n`.
fn vacuum_tail_weight(st: &FockState, k: usize) -> f64 {
    let mut weight = 0.0;
    st.for_each(|tuple, amp| {
        if tuple[k..].iter().all(|&t| t == 0) {
            weight += amp.norm_sqr();
        }
    });
    weight
}

struct Objective<'a> {
    st: &'a FockState,
    k: usize,
    n: usize,
    base: GaussianUnitaryDesc,
    cfg: &'a OptimizerConfig,
    gate_opts: GateOptions,
    parallel: bool,
}

impl Objective<'_> {
    fn full_desc(&self, x: &[f64]) -> Result<GaussianUnitaryDesc, RankError> {
        let delta = desc_from_params(x, self.n, self.cfg)?;
        Ok(delta.compose(&self.base)?)
    }

    /// Returns `(vacuum-tail weight, leak)` or an error for rejected probes.
    fn try_eval(&self, x: &[f64]) -> Result<(f64, f64), RankError> {
        let desc = self.full_desc(x)?;
        let outcome = if self.parallel {
            apply_gaussian(self.st, &desc, &self.gate_opts)?
        } else {
            apply_gaussian_seq(self.st, &desc, &self.gate_opts)?
        };
        Ok((
            vacuum_tail_weight(&outcome.state, self.k).min(1.0),
            outcome.leak,
        ))
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match self.try_eval(x) {
            Ok((weight, _)) => 1.0 - weight,
            Err(_) => PENALTY,
        }
    }
}

// ---------------------------------------------------------------------------
// Multi-start driver
// ---------------------------------------------------------------------------

struct Seed {
    base: GaussianUnitaryDesc,
    x0: Vec<f64>,
}

fn random_start(rng: &mut ChaCha12Rng, n: usize) -> Vec<f64> {
    let dim = param_dim(n);
    let mut x = Vec::with_capacity(dim);
    let (gen_len, xi_len, beta_len) = (n * n, n, 2 * n);
    for _ in 0..gen_len {
        x.push(rng.gen_range(-0.9..0.9));
    }
    for _ in 0..xi_len {
        x.push(rng.gen_range(-0.6..0.6));
    }
    for _ in 0..beta_len {
        x.push(rng.gen_range(-1.0..1.0));
    }
    for _ in 0..gen_len {
        x.push(rng.gen_range(-0.9..0.9));
    }
    x
}

fn build_seeds(
    st: &FockState,
    cfg: &OptimizerConfig,
    extra_bases: &[GaussianUnitaryDesc],
) -> Result<Vec<Seed>, RankError> {
    let n = st.n_modes();
    let dim = param_dim(n);
    let mut seeds = Vec::with_capacity(cfg.restarts.max(1) + extra_bases.len());

    if cfg.use_normal_form_start {
        let moments = fock::moments(st)?;
        let nm = normal_mode_decomposition(&moments, &cfg.tol)?;
        seeds.push(Seed {
            base: nm.as_unitary().inverse(),
            x0: vec![0.0; dim],
        });
    }
    seeds.push(Seed {
        base: GaussianUnitaryDesc::identity(n),
        x0: vec![0.0; dim],
    });
    for base in extra_bases {
        seeds.push(Seed {
            base: base.clone(),
            x0: vec![0.0; dim],
        });
    }

    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    while seeds.len() < cfg.restarts.max(1) + extra_bases.len() {
        seeds.push(Seed {
            base: GaussianUnitaryDesc::identity(n),
            x0: random_start(&mut rng, n),
        });
    }
    Ok(seeds)
}

fn run_one(
    st: &FockState,
    k: usize,
    cfg: &OptimizerConfig,
    seed: &Seed,
    parallel: bool,
) -> NmResult {
    let n = st.n_modes();
    let objective = Objective {
        st,
        k,
        n,
        base: seed.base.clone(),
        cfg,
        gate_opts: GateOptions {
            leak_budget: cfg.leak_budget,
            ..GateOptions::default()
        },
        parallel,
    };
    let dim = param_dim(n);
    let max_evals = if cfg.max_evals_per_restart == 0 {
        250 * dim + 750
    } else {
        cfg.max_evals_per_restart
    };
    let step = vec![cfg.init_step; dim];
    minimize(
        |x| objective.eval(x),
        &seed.x0,
        &step,
        &NmOptions {
            max_evals,
            ftol: cfg.ftol,
            xtol: cfg.xtol,
        },
    )
}

fn fidelity_with_seeds(
    st: &FockState,
    k: usize,
    cfg: &OptimizerConfig,
    extra_bases: &[GaussianUnitaryDesc],
    parallel: bool,
) -> Result<FidelityOutcome, RankError> {
    let n = st.n_modes();
    if k > n {
        return Err(RankError::InvalidK { k, n_modes: n });
    }
    let st = st.normalized()?;

    if k == n {
        // The projector is the identity; any Gaussian unitary attains 1.
        return Ok(FidelityOutcome {
            value: 1.0,
            desc: GaussianUnitaryDesc::identity(n),
            diagnostics: OptimizerDiagnostics {
                evaluations: 0,
                restarts: 0,
                best_restart: 0,
                converged: true,
                leak: 0.0,
            },
        });
    }

    let seeds = build_seeds(&st, cfg, extra_bases)?;

    #[cfg(feature = "parallel")]
    let results: Vec<NmResult> = if parallel {
        use rayon::prelude::*;
        seeds
            .par_iter()
            .map(|seed| run_one(&st, k, cfg, seed, parallel))
            .collect()
    } else {
        seeds
            .iter()
            .map(|seed| run_one(&st, k, cfg, seed, parallel))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<NmResult> = seeds
        .iter()
        .map(|seed| run_one(&st, k, cfg, seed, parallel))
        .collect();

    // Deterministic merge: best objective value wins, ties broken by the
    // lowest restart index, independent of scheduling.
    let (best_idx, best) = results
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.f.partial_cmp(&b.f).expect("finite").then(ia.cmp(ib)))
        .expect("at least one restart");

    if best.f >= PENALTY - 0.5 {
        return Err(RankError::ObjectiveUnavailable {
            detail: format!(
                "all {} restarts were rejected (leak budget {:.1e} too strict for this cutoff?)",
                results.len(),
                cfg.leak_budget
            ),
        });
    }

    let objective = Objective {
        st: &st,
        k,
        n,
        base: seeds[best_idx].base.clone(),
        cfg,
        gate_opts: GateOptions {
            leak_budget: cfg.leak_budget,
            ..GateOptions::default()
        },
        parallel,
    };
    let (value, leak) = objective.try_eval(&best.x)?;
    let desc = objective.full_desc(&best.x)?;

    Ok(FidelityOutcome {
        value,
        desc,
        diagnostics: OptimizerDiagnostics {
            evaluations: results.iter().map(|r| r.evals).sum(),
            restarts: results.len(),
            best_restart: best_idx,
            converged: best.converged,
            leak,
        },
    })
}

/// Best-found `k`-symplectic fidelity of a pure state.
///
/// Runs `cfg.restarts` simplex searches (normal-form seed, identity seed,
/// then random starts) and merges them deterministically; with the
/// `parallel` feature the restarts run concurrently. The returned value is
/// a lower bound on the true fidelity, accurate to roughly the reported
/// truncation leak; `k >= rank` recovers 1 up to optimizer tolerance
/// because the normal-form seed is then exact.
pub fn symplectic_fidelity(
    st: &FockState,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<FidelityOutcome, RankError> {
    fidelity_with_seeds(st, k, cfg, &[], cfg!(feature = "parallel"))
}

/// Sequential sibling of [`symplectic_fidelity`]; always single-threaded.
pub fn symplectic_fidelity_seq(
    st: &FockState,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<FidelityOutcome, RankError> {
    fidelity_with_seeds(st, k, cfg, &[], false)
}

fn curve_impl(
    st: &FockState,
    cfg: &OptimizerConfig,
    parallel: bool,
) -> Result<FidelityCurve, RankError> {
    let n = st.n_modes();
    let mut points = Vec::with_capacity(n + 1);
    let mut carry: Vec<GaussianUnitaryDesc> = Vec::new();
    for k in 0..=n {
        let outcome = fidelity_with_seeds(st, k, cfg, &carry, parallel)?;
        carry = vec![outcome.desc.clone()];
        points.push(FidelityPoint {
            k,
            value: outcome.value,
            desc: outcome.desc,
            diagnostics: outcome.diagnostics,
        });
    }
    Ok(FidelityCurve { points })
}

/// Optimizes every level `k = 0..=n`, warm-starting each level with the
/// previous optimum so the curve is non-decreasing by construction.
pub fn fidelity_curve(st: &FockState, cfg: &OptimizerConfig) -> Result<FidelityCurve, RankError> {
    curve_impl(st, cfg, cfg!(feature = "parallel"))
}

/// Sequential sibling of [`fidelity_curve`].
pub fn fidelity_curve_seq(
    st: &FockState,
    cfg: &OptimizerConfig,
) -> Result<FidelityCurve, RankError> {
    curve_impl(st, cfg, false)
}

/// Smallest `k` whose best-found fidelity reaches `1 - eps`.
///
/// Because the fidelities are lower bounds, the result is an upper bound on
/// the `eps`-approximate symplectic rank. Always terminates: the level
/// `k = n` is exactly 1.
pub fn approx_symplectic_rank(
    st: &FockState,
    eps: f64,
    cfg: &OptimizerConfig,
) -> Result<usize, RankError> {
    approx_rank_impl(st, eps, cfg, cfg!(feature = "parallel"))
}

/// Sequential sibling of [`approx_symplectic_rank`].
pub fn approx_symplectic_rank_seq(
    st: &FockState,
    eps: f64,
    cfg: &OptimizerConfig,
) -> Result<usize, RankError> {
    approx_rank_impl(st, eps, cfg, false)
}

fn approx_rank_impl(
    st: &FockState,
    eps: f64,
    cfg: &OptimizerConfig,
    parallel: bool,
) -> Result<usize, RankError> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(RankError::InvalidEpsilon {
            eps,
            range: "(0, 1)",
        });
    }
    let n = st.n_modes();
    let mut carry: Vec<GaussianUnitaryDesc> = Vec::new();
    for k in 0..=n {
        let outcome = fidelity_with_seeds(st, k, cfg, &carry, parallel)?;
        if outcome.value >= 1.0 - eps {
            return Ok(k);
        }
        carry = vec![outcome.desc];
    }
    unreachable!("level n evaluates to exactly 1");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_dimension_layout() {
        assert_eq!(param_dim(1), 5);
        assert_eq!(param_dim(2), 14);
        assert_eq!(param_dim(3), 27);
    }

    #[test]
    fn vacuum_tail_weight_counts_the_right_tuples() {
        // (|0,0> + |1,0> + |1,1>)/sqrt(3): modes >= 1 vacuum on the first two.
        let amp = C64::new(1.0 / 3.0_f64.sqrt(), 0.0);
        let st = FockState::from_amplitudes(
            2,
            4,
            [(vec![0u16, 0], amp), (vec![1, 0], amp), (vec![1, 1], amp)]
                .into_iter()
                .collect(),
        )
        .unwrap();
        let w = vacuum_tail_weight(&st, 1);
        assert!((w - 2.0 / 3.0).abs() < 1e-12, "got {w}");
        let w0 = vacuum_tail_weight(&st, 0);
        assert!((w0 - 1.0 / 3.0).abs() < 1e-12, "got {w0}");
    }
}
