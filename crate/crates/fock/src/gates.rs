//! Gate application on truncated Fock states.
//!
//! Passive (photon-number-preserving) gates act exactly: the unitary is
//! factored into two-mode Givens rotations plus phases, and each rotation
//! acts block-diagonally on subspaces of fixed photon pair-total. All other
//! continuous gates (displacement, squeezing, the cubic phase gate) act
//! through the matrix exponential of the truncated generator on a padded
//! single-mode space; the padding absorbs boundary reflection and the
//! re-truncation loss is reported as the gate's leak.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use symplectic_core::C64;

use gaussian::{desc_to_params, GaussianUnitaryDesc};
use symplectic_core::Tolerances;

use crate::basis::{total, Occupation};
use crate::error::FockError;
use crate::state::FockState;

/// One primitive gate. Displacement and squeezing take per-mode parameter
/// vectors (modes with zero parameter are skipped).
#[derive(Clone, Debug)]
pub enum Gate {
    Create { mode: usize, power: u32 },
    Annihilate { mode: usize, power: u32 },
    Displace { beta: DVector<C64> },
    Squeeze { xi: DVector<f64> },
    Passive { u: DMatrix<C64> },
    Cubic { gamma: f64, mode: usize },
}

impl Gate {
    fn name(&self) -> &'static str {
        match self {
            Gate::Create { .. } => "create",
            Gate::Annihilate { .. } => "annihilate",
            Gate::Displace { .. } => "displace",
            Gate::Squeeze { .. } => "squeeze",
            Gate::Passive { .. } => "passive",
            Gate::Cubic { .. } => "cubic",
        }
    }
}

/// Knobs for gate application.
#[derive(Clone, Debug)]
pub struct GateOptions {
    /// Maximum tolerated fraction of squared norm lost per gate.
    pub leak_budget: f64,
    /// Extra photons of headroom used while exponentiating generators.
    pub pad: usize,
}

impl Default for GateOptions {
    fn default() -> Self {
        Self {
            leak_budget: 1e-8,
            pad: 8,
        }
    }
}

/// Result of a gate application.
#[derive(Clone, Debug)]
pub struct GateOutcome {
    pub state: FockState,
    /// Norm of the output before any rescaling (for unitary gates this is
    /// the surviving fraction; for ladder gates the actual vector norm).
    pub norm: f64,
    /// Fraction of squared norm lost to re-truncation.
    pub leak: f64,
    /// Whether `state` was rescaled back to the input norm.
    pub normalized: bool,
}

/// Applies a gate, using data parallelism over amplitude groups when the
/// `parallel` feature is enabled.
pub fn apply_gate(st: &FockState, gate: &Gate, opts: &GateOptions) -> Result<GateOutcome, FockError> {
    apply_gate_impl(st, gate, opts, true)
}

/// Sequential sibling of [`apply_gate`]; always single-threaded.
pub fn apply_gate_seq(
    st: &FockState,
    gate: &Gate,
    opts: &GateOptions,
) -> Result<GateOutcome, FockError> {
    apply_gate_impl(st, gate, opts, false)
}

/// Applies a full Gaussian unitary through its normal form
/// `G = G_U S(xi) D(beta) G_V` (two exact passive layers, one diagonal
/// squeeze layer, one displacement layer).
pub fn apply_gaussian(
    st: &FockState,
    desc: &GaussianUnitaryDesc,
    opts: &GateOptions,
) -> Result<GateOutcome, FockError> {
    apply_gaussian_impl(st, desc, opts, true)
}

/// Sequential sibling of [`apply_gaussian`].
pub fn apply_gaussian_seq(
    st: &FockState,
    desc: &GaussianUnitaryDesc,
    opts: &GateOptions,
) -> Result<GateOutcome, FockError> {
    apply_gaussian_impl(st, desc, opts, false)
}

fn apply_gaussian_impl(
    st: &FockState,
    desc: &GaussianUnitaryDesc,
    opts: &GateOptions,
    par: bool,
) -> Result<GateOutcome, FockError> {
    if desc.n_modes() != st.n_modes() {
        return Err(FockError::DimensionMismatch {
            expected: st.n_modes(),
            got: desc.n_modes(),
        });
    }
    let params = desc_to_params(desc, &Tolerances::default())?;
    let chain = [
        Gate::Passive {
            u: params.v.clone(),
        },
        Gate::Displace {
            beta: params.beta.clone(),
        },
        Gate::Squeeze {
            xi: params.xi.clone(),
        },
        Gate::Passive {
            u: params.u.clone(),
        },
    ];
    let mut state = st.clone();
    let mut survived = 1.0;
    for gate in &chain {
        let out = apply_gate_impl(&state, gate, opts, par)?;
        survived *= 1.0 - out.leak;
        state = out.state;
    }
    let leak = 1.0 - survived;
    state.set_last_leak(leak);
    Ok(GateOutcome {
        state,
        norm: survived.sqrt(),
        leak,
        normalized: true,
    })
}

fn apply_gate_impl(
    st: &FockState,
    gate: &Gate,
    opts: &GateOptions,
    par: bool,
) -> Result<GateOutcome, FockError> {
    match gate {
        Gate::Create { mode, power } => ladder(st, *mode, *power, true),
        Gate::Annihilate { mode, power } => ladder(st, *mode, *power, false),
        Gate::Displace { beta } => {
            check_len(st, beta.len())?;
            let dim = st.cutoff() + opts.pad + 1;
            let ops: Vec<(usize, DMatrix<C64>)> = beta
                .iter()
                .enumerate()
                .filter(|(_, b)| b.norm_sqr() > 0.0)
                .map(|(j, b)| {
                    let a = ladder_matrix(dim);
                    let h = a.adjoint() * *b - &a * b.conj();
                    (j, expm(&h))
                })
                .collect();
            single_mode_chain(st, &ops, gate.name(), opts, par)
        }
        Gate::Squeeze { xi } => {
            check_len(st, xi.len())?;
            let dim = st.cutoff() + opts.pad + 1;
            let ops: Vec<(usize, DMatrix<C64>)> = xi
                .iter()
                .enumerate()
                .filter(|(_, x)| **x != 0.0)
                .map(|(j, x)| {
                    let a = ladder_matrix(dim);
                    let adag = a.adjoint();
                    let h = (&adag * &adag - &a * &a) * C64::new(0.5 * x, 0.0);
                    (j, expm(&h))
                })
                .collect();
            single_mode_chain(st, &ops, gate.name(), opts, par)
        }
        Gate::Cubic { gamma, mode } => {
            check_mode(st, *mode)?;
            let dim = st.cutoff() + opts.pad + 1;
            let a = ladder_matrix(dim);
            let x = (&a + a.adjoint()) / C64::new(2f64.sqrt(), 0.0);
            let h = &x * &x * &x * C64::new(0.0, *gamma);
            single_mode_chain(st, &[(*mode, expm(&h))], gate.name(), opts, par)
        }
        Gate::Passive { u } => apply_passive(st, u, opts, par),
    }
}

fn check_mode(st: &FockState, mode: usize) -> Result<(), FockError> {
    if mode >= st.n_modes() {
        return Err(FockError::ModeOutOfRange {
            mode,
            n_modes: st.n_modes(),
        });
    }
    Ok(())
}

fn check_len(st: &FockState, len: usize) -> Result<(), FockError> {
    if len != st.n_modes() {
        return Err(FockError::DimensionMismatch {
            expected: st.n_modes(),
            got: len,
        });
    }
    Ok(())
}

/// `a^dagger^p` or `a^p` on one mode, exact. Creation raises the cutoff so
/// no amplitude is lost; annihilation leaves it unchanged. The result is
/// unnormalized.
fn ladder(st: &FockState, mode: usize, power: u32, create: bool) -> Result<GateOutcome, FockError> {
    check_mode(st, mode)?;
    let p = power as usize;
    let mut amps = HashMap::new();
    st.for_each(|t, amp| {
        let k = t[mode] as usize;
        if create {
            let mut factor = 1.0;
            for i in 1..=p {
                factor *= (k + i) as f64;
            }
            let mut nt = t.to_vec();
            nt[mode] += power as u16;
            amps.insert(nt, amp * C64::new(factor.sqrt(), 0.0));
        } else if k >= p {
            let mut factor = 1.0;
            for i in 0..p {
                factor *= (k - i) as f64;
            }
            let mut nt = t.to_vec();
            nt[mode] -= power as u16;
            amps.insert(nt, amp * C64::new(factor.sqrt(), 0.0));
        }
    });
    let cutoff = if create { st.cutoff() + p } else { st.cutoff() };
    let state = FockState::seal(st.n_modes(), cutoff, amps, 0.0);
    let norm = state.norm();
    Ok(GateOutcome {
        state,
        norm,
        leak: 0.0,
        normalized: false,
    })
}

/// Applies a chain of single-mode unitaries (one per listed mode), then
/// rescales back to the input norm and checks the cumulative leak budget.
fn single_mode_chain(
    st: &FockState,
    ops: &[(usize, DMatrix<C64>)],
    gate_name: &str,
    opts: &GateOptions,
    par: bool,
) -> Result<GateOutcome, FockError> {
    let input_norm = st.norm();
    if input_norm < 1e-150 {
        return Err(FockError::ZeroNormState);
    }
    let mut state = st.clone();
    let mut survived = 1.0;
    for (mode, w) in ops {
        check_mode(&state, *mode)?;
        let (next, kept_fraction) = single_mode_pass(&state, *mode, w, par);
        survived *= kept_fraction;
        state = next;
    }
    let leak = 1.0 - survived;
    if leak > opts.leak_budget {
        return Err(FockError::LeakBudgetExceeded {
            gate: gate_name.into(),
            leak,
            budget: opts.leak_budget,
        });
    }
    // Restore the input norm (unitary semantics).
    let norm = state.norm();
    let mut state = if norm > 1e-150 {
        state.scaled(C64::new(input_norm / norm, 0.0))
    } else {
        state
    };
    state.set_last_leak(leak);
    Ok(GateOutcome {
        state,
        norm: survived.sqrt() * input_norm,
        leak,
        normalized: true,
    })
}

/// One single-mode unitary on `mode`: returns the re-truncated state and
/// the surviving squared-norm fraction.
fn single_mode_pass(
    st: &FockState,
    mode: usize,
    w: &DMatrix<C64>,
    par: bool,
) -> (FockState, f64) {
    let cutoff = st.cutoff();
    let padded = w.nrows() - 1;

    // Group amplitudes by the tuple with `mode` zeroed out.
    let mut groups: HashMap<Occupation, Vec<(usize, C64)>> = HashMap::new();
    st.for_each(|t, amp| {
        let mut rest = t.to_vec();
        let k = rest[mode] as usize;
        rest[mode] = 0;
        groups.entry(rest).or_default().push((k, amp));
    });
    let groups: Vec<(Occupation, Vec<(usize, C64)>)> = groups.into_iter().collect();

    let process = |(rest, slice): &(Occupation, Vec<(usize, C64)>)| {
        let t_rest = total(rest);
        let keep = cutoff - t_rest; // inputs satisfy k <= keep already
        let reach = padded - t_rest; // padded headroom for this group
        let mut in_norm2 = 0.0;
        let mut out = vec![C64::new(0.0, 0.0); reach + 1];
        for &(k, amp) in slice {
            in_norm2 += amp.norm_sqr();
            for (kp, o) in out.iter_mut().enumerate() {
                *o += w[(kp, k)] * amp;
            }
        }
        let mut kept: Vec<(Occupation, C64)> = Vec::with_capacity(keep + 1);
        let mut kept_norm2 = 0.0;
        for (kp, &o) in out.iter().take(keep + 1).enumerate() {
            if o.norm_sqr() > 0.0 {
                kept_norm2 += o.norm_sqr();
                let mut t = rest.clone();
                t[mode] = kp as u16;
                kept.push((t, o));
            }
        }
        // Everything not kept is lost, including amplitude pushed past the
        // padded reach (the exponential is unitary on the padded space, so
        // input norm accounts for the total exactly).
        (kept, (in_norm2 - kept_norm2).max(0.0))
    };

    let results: Vec<(Vec<(Occupation, C64)>, f64)> = run_over(&groups, process, par);

    let mut amps = HashMap::new();
    let mut lost_total = 0.0;
    let mut kept_total = 0.0;
    for (kept, lost) in results {
        lost_total += lost;
        for (t, a) in kept {
            kept_total += a.norm_sqr();
            amps.insert(t, a);
        }
    }
    let denom = kept_total + lost_total;
    let kept_fraction = if denom > 0.0 { kept_total / denom } else { 1.0 };
    (
        FockState::seal(st.n_modes(), cutoff, amps, 1.0 - kept_fraction),
        kept_fraction,
    )
}

/// Exact passive gate: Givens factorization into two-mode rotations plus
/// output phases.
fn apply_passive(
    st: &FockState,
    u: &DMatrix<C64>,
    opts: &GateOptions,
    par: bool,
) -> Result<GateOutcome, FockError> {
    let n = st.n_modes();
    if u.nrows() != n || u.ncols() != n {
        return Err(FockError::DimensionMismatch {
            expected: n,
            got: u.nrows().max(u.ncols()),
        });
    }
    let defect = (u.adjoint() * u - DMatrix::<C64>::identity(n, n))
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if defect > 1e-8 {
        return Err(FockError::InvalidGate {
            detail: format!("passive matrix is not unitary (defect {defect:.3e})"),
        });
    }

    let (rotations, phases) = givens_factor(u);

    let input_norm = st.norm();
    // Phases first: amp(t) *= prod_m d_m^{t_m}.
    let mut amps = HashMap::new();
    st.for_each(|t, amp| {
        let mut factor = C64::new(1.0, 0.0);
        for (m, &k) in t.iter().enumerate() {
            factor *= C64::from_polar(1.0, phases[m].arg() * k as f64);
        }
        amps.insert(t.to_vec(), amp * factor);
    });
    let mut state = FockState::seal(n, st.cutoff(), amps, 0.0);

    // Rotations in reverse factorization order.
    for (p, q, g) in rotations.iter().rev() {
        state = apply_pair_rotation(&state, *p, *q, g, par);
    }

    // Passive gates are exact; any deviation is floating-point noise.
    let norm = state.norm();
    let leak = (1.0 - (norm / input_norm).powi(2)).abs();
    if leak > opts.leak_budget {
        return Err(FockError::LeakBudgetExceeded {
            gate: "passive".into(),
            leak,
            budget: opts.leak_budget,
        });
    }
    let mut state = state.scaled(C64::new(input_norm / norm, 0.0));
    state.set_last_leak(leak);
    Ok(GateOutcome {
        state,
        norm,
        leak,
        normalized: true,
    })
}

/// Factors a unitary as `U = R_1^dag ... R_K^dag D` where each `R_k` is a
/// Givens rotation on adjacent rows and `D` is diagonal. Returned rotations
/// are the 2x2 blocks `R_k^dag` with their mode pairs, in factorization
/// order (apply them to states in reverse).
#[allow(clippy::type_complexity)]
fn givens_factor(u: &DMatrix<C64>) -> (Vec<(usize, usize, [[C64; 2]; 2])>, Vec<C64>) {
    let n = u.nrows();
    let mut m = u.clone();
    let mut rotations = Vec::new();
    for c in 0..n {
        for r in (c + 1..n).rev() {
            let a = m[(r - 1, c)];
            let b = m[(r, c)];
            let rho = (a.norm_sqr() + b.norm_sqr()).sqrt();
            if b.norm() < 1e-15 * rho.max(1e-300) {
                continue;
            }
            let g00 = a.conj() / rho;
            let g01 = b.conj() / rho;
            let g10 = -b / rho;
            let g11 = a / rho;
            // Multiply rows (r-1, r) of m by g = [[g00, g01], [g10, g11]].
            for col in 0..n {
                let x = m[(r - 1, col)];
                let y = m[(r, col)];
                m[(r - 1, col)] = g00 * x + g01 * y;
                m[(r, col)] = g10 * x + g11 * y;
            }
            // Record g^dag, the factor that multiplies back on the left.
            rotations.push((
                r - 1,
                r,
                [[g00.conj(), g10.conj()], [g01.conj(), g11.conj()]],
            ));
        }
    }
    let phases = (0..n).map(|i| m[(i, i)]).collect();
    (rotations, phases)
}

/// Applies an embedded two-mode passive rotation exactly: within each block
/// of fixed photon total `s` on the pair, the action is the binomial
/// transfer matrix of `(v00 x + v10 y)^{k1} (v01 x + v11 y)^{s - k1}`.
fn apply_pair_rotation(
    st: &FockState,
    p: usize,
    q: usize,
    v: &[[C64; 2]; 2],
    par: bool,
) -> FockState {
    let cutoff = st.cutoff();

    // Group by (rest tuple, pair total), keeping k1 = occupation of mode p.
    let mut groups: HashMap<Occupation, Vec<(usize, C64)>> = HashMap::new();
    st.for_each(|t, amp| {
        let k1 = t[p] as usize;
        let s = k1 + t[q] as usize;
        let mut rest = t.to_vec();
        rest[p] = s as u16; // encode s in the key; mode q zeroed
        rest[q] = 0;
        groups.entry(rest).or_default().push((k1, amp));
    });
    let groups: Vec<(Occupation, Vec<(usize, C64)>)> = groups.into_iter().collect();

    // Transfer matrices for every pair total that occurs.
    let s_max = groups
        .iter()
        .map(|(key, _)| key[p] as usize)
        .max()
        .unwrap_or(0);
    let blocks: Vec<DMatrix<C64>> = (0..=s_max).map(|s| pair_block(v, s)).collect();

    let process = |(key, slice): &(Occupation, Vec<(usize, C64)>)| {
        let s = key[p] as usize;
        let block = &blocks[s];
        let mut out = vec![C64::new(0.0, 0.0); s + 1];
        for &(k1, amp) in slice {
            for (j, o) in out.iter_mut().enumerate() {
                *o += block[(j, k1)] * amp;
            }
        }
        let mut kept = Vec::with_capacity(s + 1);
        for (j, &o) in out.iter().enumerate() {
            if o.norm_sqr() > 0.0 {
                let mut t = key.clone();
                t[p] = j as u16;
                t[q] = (s - j) as u16;
                kept.push((t, o));
            }
        }
        (kept, 0.0)
    };

    let results: Vec<(Vec<(Occupation, C64)>, f64)> = run_over(&groups, process, par);
    let mut amps = HashMap::new();
    for (kept, _) in results {
        for (t, a) in kept {
            amps.insert(t, a);
        }
    }
    FockState::seal(st.n_modes(), cutoff, amps, 0.0)
}

/// The `(s+1) x (s+1)` transfer matrix of a 2x2 passive rotation within the
/// pair-total-`s` block.
fn pair_block(v: &[[C64; 2]; 2], s: usize) -> DMatrix<C64> {
    let lf = ln_factorials(s);
    let mut block = DMatrix::from_element(s + 1, s + 1, C64::new(0.0, 0.0));
    for k1 in 0..=s {
        // Coefficients of (v00 x + v10 y)^{k1} (v01 x + v11 y)^{s-k1} by
        // iterated multiplication; index = power of x.
        let mut poly = vec![C64::new(0.0, 0.0); s + 1];
        poly[0] = C64::new(1.0, 0.0);
        let mut degree = 0usize;
        for (a, b) in std::iter::repeat((v[0][0], v[1][0]))
            .take(k1)
            .chain(std::iter::repeat((v[0][1], v[1][1])).take(s - k1))
        {
            degree += 1;
            for j in (0..=degree).rev() {
                let from_x = if j > 0 { poly[j - 1] * a } else { C64::new(0.0, 0.0) };
                poly[j] = from_x + poly[j] * b;
            }
        }
        for j in 0..=s {
            let weight =
                (0.5 * (lf[j] + lf[s - j] - lf[k1] - lf[s - k1])).exp();
            block[(j, k1)] = poly[j] * C64::new(weight, 0.0);
        }
    }
    block
}

/// `ln(k!)` for `k = 0..=n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut lf = Vec::with_capacity(n + 1);
    lf.push(0.0);
    for k in 1..=n {
        lf.push(lf[k - 1] + (k as f64).ln());
    }
    lf
}

/// Single-mode annihilation operator on `dim` levels.
fn ladder_matrix(dim: usize) -> DMatrix<C64> {
    let mut a = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    for k in 1..dim {
        a[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    a
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub(crate) fn expm(h: &DMatrix<C64>) -> DMatrix<C64> {
    let dim = h.nrows();
    let norm: f64 = h
        .column_iter()
        .map(|c| c.iter().map(|x| x.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as u32
    } else {
        0
    };
    let scaled = h / C64::new(2f64.powi(squarings as i32), 0.0);

    let mut result = DMatrix::<C64>::identity(dim, dim);
    let mut term = DMatrix::<C64>::identity(dim, dim);
    for k in 1..=24 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        result += &term;
        let tail: f64 = term.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if tail < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Runs `process` over the groups, in parallel when requested and compiled.
fn run_over<K: Sync, F, O>(groups: &[K], process: F, par: bool) -> Vec<O>
where
    F: Fn(&K) -> O + Sync,
    O: Send,
{
    #[cfg(feature = "parallel")]
    {
        if par && groups.len() > 32 {
            return groups.par_iter().map(&process).collect();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = par;
    groups.iter().map(&process).collect()
}
