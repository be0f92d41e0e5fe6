//! Truncated Fock-space state vectors.

use std::collections::HashMap;
use std::sync::Arc;

use symplectic_core::C64;

use crate::basis::{simplex_dim, total, FockBasis, Occupation};
use crate::error::FockError;

/// Fraction of the basis above which amplitudes switch to dense storage.
const DENSE_FILL: f64 = 0.5;
/// Amplitudes below this modulus are dropped from sparse storage.
const AMP_FLOOR: f64 = 1e-300;

#[derive(Clone, Debug)]
enum Repr {
    Sparse(HashMap<Occupation, C64>),
    Dense {
        basis: Arc<FockBasis>,
        data: Vec<C64>,
    },
}

/// A state of `n_modes` bosonic modes truncated at total photon number
/// `cutoff`. Amplitudes are stored sparsely by occupation tuple and switch
/// to a dense vector over the basis when the support covers most of it.
#[derive(Clone, Debug)]
pub struct FockState {
    n_modes: usize,
    cutoff: usize,
    repr: Repr,
    last_leak: f64,
}

impl FockState {
    /// Builds a state from explicit amplitudes; tuples beyond the cutoff are
    /// rejected. The result is not normalized automatically.
    pub fn from_amplitudes(
        n_modes: usize,
        cutoff: usize,
        amps: HashMap<Occupation, C64>,
    ) -> Result<Self, FockError> {
        for t in amps.keys() {
            if t.len() != n_modes {
                return Err(FockError::DimensionMismatch {
                    expected: n_modes,
                    got: t.len(),
                });
            }
            if total(t) > cutoff {
                return Err(FockError::CutoffExceeded {
                    total: total(t),
                    cutoff,
                });
            }
        }
        Ok(Self::seal(n_modes, cutoff, amps, 0.0))
    }

    /// Internal constructor: drops negligible amplitudes and picks the
    /// storage representation from the fill ratio.
    pub(crate) fn seal(
        n_modes: usize,
        cutoff: usize,
        mut amps: HashMap<Occupation, C64>,
        last_leak: f64,
    ) -> Self {
        amps.retain(|_, a| a.norm_sqr() > AMP_FLOOR);
        let dim = simplex_dim(n_modes, cutoff);
        let repr = if (amps.len() as f64) > DENSE_FILL * dim as f64 {
            let basis = FockBasis::new(n_modes, cutoff);
            let mut data = vec![C64::new(0.0, 0.0); dim];
            for (t, a) in amps {
                data[basis.index_of(&t).expect("tuple within cutoff")] = a;
            }
            Repr::Dense { basis, data }
        } else {
            Repr::Sparse(amps)
        };
        Self {
            n_modes,
            cutoff,
            repr,
            last_leak,
        }
    }

    /// The vacuum of `n` modes (cutoff 0 suffices, but a cutoff can be
    /// chosen so later gates have room).
    pub fn vacuum(n_modes: usize, cutoff: usize) -> Self {
        let mut amps = HashMap::new();
        amps.insert(vec![0u16; n_modes], C64::new(1.0, 0.0));
        Self::seal(n_modes, cutoff, amps, 0.0)
    }

    /// The Fock state `|k_1, ..., k_n>`.
    pub fn fock(tuple: &[u16], cutoff: usize) -> Result<Self, FockError> {
        let t = total(tuple);
        if t > cutoff {
            return Err(FockError::CutoffExceeded { total: t, cutoff });
        }
        let mut amps = HashMap::new();
        amps.insert(tuple.to_vec(), C64::new(1.0, 0.0));
        Ok(Self::seal(tuple.len(), cutoff, amps, 0.0))
    }

    /// The coherent state `|beta_1> (x) ... (x) |beta_n>`, truncated at
    /// `cutoff` total photons. If the truncated tail exceeds `leak_budget`,
    /// the cutoff is raised (up to an internal cap) until it does not.
    pub fn coherent(beta: &nalgebra::DVector<C64>, cutoff: usize, leak_budget: f64) -> Result<Self, FockError> {
        const CUTOFF_CAP: usize = 512;
        let n = beta.len();
        let energy: f64 = beta.iter().map(|b| b.norm_sqr()).sum();
        let mut cutoff = cutoff;
        loop {
            // Tail of the total-photon distribution: Poisson(energy).
            let leak = poisson_tail(energy, cutoff);
            if leak <= leak_budget || cutoff >= CUTOFF_CAP {
                if leak > leak_budget {
                    return Err(FockError::LeakBudgetExceeded {
                        gate: "coherent".into(),
                        leak,
                        budget: leak_budget,
                    });
                }
                break;
            }
            cutoff = (cutoff + 4).min(CUTOFF_CAP);
        }

        // Per-mode amplitude ladders c_k = e^{-|b|^2/2} b^k / sqrt(k!).
        let ladders: Vec<Vec<C64>> = beta
            .iter()
            .map(|b| {
                let mut l = Vec::with_capacity(cutoff + 1);
                let mut c = C64::new((-0.5 * b.norm_sqr()).exp(), 0.0);
                for k in 0..=cutoff {
                    l.push(c);
                    c *= b / C64::new(((k + 1) as f64).sqrt(), 0.0);
                }
                l
            })
            .collect();

        let mut amps = HashMap::new();
        let mut tuple = vec![0u16; n];
        fill_product(&mut amps, &ladders, &mut tuple, 0, cutoff, C64::new(1.0, 0.0));
        let mut st = Self::seal(n, cutoff, amps, 0.0);
        let norm = st.norm();
        st.last_leak = 1.0 - norm * norm;
        Ok(st.normalized()?)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Norm lost to truncation by the most recent gate application or
    /// truncated construction.
    pub fn last_leak(&self) -> f64 {
        self.last_leak
    }

    pub(crate) fn set_last_leak(&mut self, leak: f64) {
        self.last_leak = leak;
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn support_size(&self) -> usize {
        match &self.repr {
            Repr::Sparse(m) => m.len(),
            Repr::Dense { data, .. } => data.iter().filter(|a| a.norm_sqr() > AMP_FLOOR).count(),
        }
    }

    /// Whether the amplitudes are currently stored densely.
    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense { .. })
    }

    /// Amplitude of one occupation tuple (zero if absent or out of range).
    pub fn amplitude(&self, tuple: &[u16]) -> C64 {
        match &self.repr {
            Repr::Sparse(m) => m.get(tuple).copied().unwrap_or_else(|| C64::new(0.0, 0.0)),
            Repr::Dense { basis, data } => basis
                .index_of(tuple)
                .map(|i| data[i])
                .unwrap_or_else(|| C64::new(0.0, 0.0)),
        }
    }

    /// Visits every stored amplitude.
    pub fn for_each(&self, mut f: impl FnMut(&[u16], C64)) {
        match &self.repr {
            Repr::Sparse(m) => {
                for (t, a) in m {
                    f(t, *a);
                }
            }
            Repr::Dense { basis, data } => {
                for (i, a) in data.iter().enumerate() {
                    if a.norm_sqr() > AMP_FLOOR {
                        f(basis.tuple_at(i), *a);
                    }
                }
            }
        }
    }

    /// Copies the stored amplitudes into a tuple -> amplitude map.
    pub fn to_map(&self) -> HashMap<Occupation, C64> {
        let mut out = HashMap::new();
        self.for_each(|t, a| {
            out.insert(t.to_vec(), a);
        });
        out
    }

    pub fn norm_sqr(&self) -> f64 {
        let mut acc = 0.0;
        self.for_each(|_, a| acc += a.norm_sqr());
        acc
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Rescales to unit norm.
    pub fn normalized(&self) -> Result<Self, FockError> {
        let norm = self.norm();
        if norm < 1e-150 {
            return Err(FockError::ZeroNormState);
        }
        Ok(self.scaled(C64::new(1.0 / norm, 0.0)))
    }

    /// Multiplies every amplitude by a scalar.
    pub fn scaled(&self, factor: C64) -> Self {
        let mut out = self.clone();
        match &mut out.repr {
            Repr::Sparse(m) => {
                for a in m.values_mut() {
                    *a *= factor;
                }
            }
            Repr::Dense { data, .. } => {
                for a in data.iter_mut() {
                    *a *= factor;
                }
            }
        }
        out
    }

    /// Re-declares the cutoff. Raising it is always exact; lowering drops
    /// amplitudes beyond the new cutoff (recorded in `last_leak`).
    pub fn with_cutoff(&self, cutoff: usize) -> Self {
        let mut dropped = 0.0;
        let mut amps = HashMap::new();
        self.for_each(|t, a| {
            if total(t) <= cutoff {
                amps.insert(t.to_vec(), a);
            } else {
                dropped += a.norm_sqr();
            }
        });
        Self::seal(self.n_modes, cutoff, amps, dropped)
    }

    /// Tensor product with another state.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = HashMap::new();
        self.for_each(|ta, aa| {
            other.for_each(|tb, ab| {
                let mut t = Vec::with_capacity(ta.len() + tb.len());
                t.extend_from_slice(ta);
                t.extend_from_slice(tb);
                amps.insert(t, aa * ab);
            });
        });
        Self::seal(
            self.n_modes + other.n_modes,
            self.cutoff + other.cutoff,
            amps,
            0.0,
        )
    }
}

fn fill_product(
    out: &mut HashMap<Occupation, C64>,
    ladders: &[Vec<C64>],
    tuple: &mut Occupation,
    mode: usize,
    budget: usize,
    acc: C64,
) {
    if mode == ladders.len() {
        if acc.norm_sqr() > AMP_FLOOR {
            out.insert(tuple.clone(), acc);
        }
        return;
    }
    for k in 0..=budget {
        let c = ladders[mode][k];
        if c.norm_sqr() <= AMP_FLOOR && k > 0 {
            // Ladder amplitudes only shrink transiently for small k; beyond
            // the floor the remaining contributions are negligible anyway.
            continue;
        }
        tuple[mode] = k as u16;
        fill_product(out, ladders, tuple, mode + 1, budget - k, acc * c);
    }
    tuple[mode] = 0;
}

/// Upper tail `P(X > cutoff)` of a Poisson distribution with mean `lambda`.
fn poisson_tail(lambda: f64, cutoff: usize) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    let mut term = (-lambda).exp();
    let mut cdf = term;
    for k in 1..=cutoff {
        term *= lambda / k as f64;
        cdf += term;
    }
    (1.0 - cdf).max(0.0)
}

/// Inner product `<a|b>` (conjugate-linear in `a`). The states must share
/// their mode count; differing cutoffs are treated as embeddings of the
/// same infinite-dimensional space.
pub fn overlap(a: &FockState, b: &FockState) -> Result<C64, FockError> {
    if a.n_modes() != b.n_modes() {
        return Err(FockError::DimensionMismatch {
            expected: a.n_modes(),
            got: b.n_modes(),
        });
    }
    // Iterate the smaller support.
    let (small, big, conj_small) = if a.support_size() <= b.support_size() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    let mut acc = C64::new(0.0, 0.0);
    small.for_each(|t, s| {
        let o = big.amplitude(t);
        acc += if conj_small { s.conj() * o } else { o.conj() * s };
    });
    Ok(acc)
}

/// `|<a|b>|^2` for pure states.
pub fn fidelity_pure(a: &FockState, b: &FockState) -> Result<f64, FockError> {
    Ok(overlap(a, b)?.norm_sqr())
}
