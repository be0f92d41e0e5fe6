//! Enumeration of the total-photon-truncated Fock basis.
//!
//! The basis of `n` modes at cutoff `N` is the set of occupation tuples
//! `(k_1, ..., k_n)` with `sum k_i <= N`, ordered lexicographically. Total
//! photon truncation (a simplex, not a box) keeps the represented subspace
//! aligned with the projector used by the simulation bounds.

use std::collections::HashMap;
use std::sync::Arc;

/// Occupation-number tuple `(k_1, ..., k_n)`.
pub type Occupation = Vec<u16>;

/// Dense enumeration of the truncated basis with tuple <-> index maps.
#[derive(Debug)]
pub struct FockBasis {
    n_modes: usize,
    cutoff: usize,
    tuples: Vec<Occupation>,
    index: HashMap<Occupation, usize>,
}

impl FockBasis {
    pub fn new(n_modes: usize, cutoff: usize) -> Arc<Self> {
        let mut tuples = Vec::with_capacity(simplex_dim(n_modes, cutoff));
        let mut current = vec![0u16; n_modes];
        enumerate(&mut tuples, &mut current, 0, cutoff);
        let index = tuples
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Arc::new(Self {
            n_modes,
            cutoff,
            tuples,
            index,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of basis tuples, `C(cutoff + n, n)`.
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn index_of(&self, tuple: &[u16]) -> Option<usize> {
        self.index.get(tuple).copied()
    }

    pub fn tuple_at(&self, index: usize) -> &[u16] {
        &self.tuples[index]
    }

    pub fn tuples(&self) -> &[Occupation] {
        &self.tuples
    }
}

fn enumerate(out: &mut Vec<Occupation>, current: &mut Occupation, mode: usize, budget: usize) {
    if mode == current.len() {
        out.push(current.clone());
        return;
    }
    for k in 0..=budget {
        current[mode] = k as u16;
        enumerate(out, current, mode + 1, budget - k);
    }
    current[mode] = 0;
}

/// `C(cutoff + n, n)`: the number of occupation tuples in the basis.
pub fn simplex_dim(n_modes: usize, cutoff: usize) -> usize {
    let mut acc: usize = 1;
    for i in 1..=n_modes {
        acc = acc * (cutoff + i) / i;
    }
    acc
}

/// Total photon number of a tuple.
pub fn total(tuple: &[u16]) -> usize {
    tuple.iter().map(|&k| k as usize).sum()
}
