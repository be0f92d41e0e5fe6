//! Truncated Fock-space backend: exact state vectors up to a total-photon
//! cutoff, gate application with tracked truncation leak, overlaps and
//! distances, moment extraction, heterodyne post-selection, and Husimi
//! densities.
//!
//! States live on the simplex of photon-number tuples `(k_1, ..., k_n)` with
//! `sum k_i <= cutoff` and switch automatically between sparse and dense
//! amplitude storage. Gate application returns fresh states together with
//! the norm lost to truncation, so every result carries an explicit error
//! budget. The `parallel` feature (default) runs the heavy per-group passes
//! on a thread pool; the `_seq` variants always run sequentially.

pub mod basis;
pub mod density;
pub mod error;
pub mod gates;
pub mod moments;
pub mod project;
pub mod state;

pub use basis::{simplex_dim, FockBasis, Occupation};
pub use density::{trace_distance, DensityOp};
pub use error::FockError;
pub use gates::{
    apply_gate, apply_gate_seq, apply_gaussian, apply_gaussian_seq, Gate, GateOptions,
    GateOutcome,
};
pub use moments::{mean_photon_number, moments};
pub use project::{heterodyne_project, husimi_density, HeterodyneOutcome};
pub use state::{fidelity_pure, overlap, FockState};
