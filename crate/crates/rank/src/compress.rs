//! Non-Gaussian compression: factor a pure state into a Gaussian unitary
//! acting on a small non-Gaussian core padded with vacuum.
//!
//! Every pure state `psi` of symplectic rank `s` factors as
//! `psi = G (phi (x) |0...0>)` with `G` Gaussian and `phi` an `s`-mode core:
//! take the Williamson form `V(psi) = S D S^T`, set
//! `G = displace(m(psi)) . unitary(S)`, and apply `G^{-1}` in the Fock
//! basis. The result has diagonal covariance with the excited eigenvalues
//! sorted first, zero mean, and — for a pure state — exactly vanishing
//! weight outside the `core (x) vacuum` sector, so projecting the trailing
//! modes onto the vacuum recovers `phi`. The residual weight outside that
//! sector measures how well the factorization closed numerically.

use fock::{apply_gaussian, fidelity_pure, mean_photon_number, FockState, GateOptions};
use gaussian::{normal_mode_decomposition, GaussianUnitaryDesc};
use symplectic_core::Tolerances;

use crate::error::RankError;
use crate::rank::DEFAULT_RANK_TOL;

/// Knobs for [`compress_with`].
#[derive(Clone, Debug)]
pub struct CompressionOptions {
    /// Symplectic eigenvalues within `tau_rank` of 1 count as vacuum modes.
    pub tau_rank: f64,
    /// Largest accepted residual norm outside the `core (x) vacuum` sector;
    /// beyond this the factorization failed (cutoff too small, or a
    /// misclassified eigenvalue) and an error is returned.
    pub tau_comp: f64,
    /// Leak budget and padding for the Fock-basis unitary applications.
    pub gate_options: GateOptions,
    pub tol: Tolerances,
}

impl Default for CompressionOptions {
    fn default() -> Self {
        Self {
            tau_rank: DEFAULT_RANK_TOL,
            tau_comp: 1e-3,
            gate_options: GateOptions::default(),
            tol: Tolerances::default(),
        }
    }
}

/// A pure state factored as `G (core (x) vacuum)`.
#[derive(Clone, Debug)]
pub struct CompressionResult {
    /// The Gaussian unitary `G`.
    pub desc: GaussianUnitaryDesc,
    /// The non-Gaussian core on `rank` modes; `None` when the input is
    /// Gaussian (rank 0) and the factorization is `G |vacuum>`.
    pub phi: Option<FockState>,
    /// Recovered symplectic rank (number of core modes).
    pub rank: usize,
    /// Norm of `G^{-1} psi` outside the `core (x) vacuum` sector.
    pub residual: f64,
    /// Symplectic eigenvalues of the input, sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Measured fidelity of `G (core (x) vacuum)` with the input.
    pub reconstruction_fidelity: f64,
    /// How far the core moments are from the expected normal form: largest
    /// entry of `|V(phi) - diag(d_1, d_1, ..)|` and `|m(phi)|` (zero for
    /// rank 0).
    pub core_moment_defect: f64,
    /// Mean photon number of the input.
    pub mean_photon_input: f64,
    /// Mean photon number of the core; never exceeds the input's by more
    /// than numerical noise.
    pub mean_photon_core: f64,
    /// Truncation leak accumulated over the inverse and reconstruction
    /// applications.
    pub leak: f64,
}

/// [`compress_with`] under default options.
pub fn compress(st: &FockState) -> Result<CompressionResult, RankError> {
    compress_with(st, &CompressionOptions::default())
}

/// Factors a pure normalized state into `G (core (x) vacuum)`.
pub fn compress_with(
    st: &FockState,
    opts: &CompressionOptions,
) -> Result<CompressionResult, RankError> {
    let st = st.normalized()?;
    let n = st.n_modes();

    let moments = fock::moments(&st)?;
    let nm = normal_mode_decomposition(&moments, &opts.tol)?;
    let eigenvalues: Vec<f64> = nm.nu.iter().map(|&nu| 2.0 * nu + 1.0).collect();
    let rank = eigenvalues
        .iter()
        .filter(|&&d| d > 1.0 + opts.tau_rank)
        .count();

    let desc = nm.as_unitary();
    let inverted = apply_gaussian(&st, &desc.inverse(), &opts.gate_options)?;
    let mut leak = inverted.leak;
    let rotated = inverted.state;

    // Split the rotated state at the core/vacuum boundary.
    let mut kept = std::collections::HashMap::new();
    let mut outside = 0.0;
    rotated.for_each(|tuple, amp| {
        if tuple[rank..].iter().all(|&t| t == 0) {
            kept.insert(tuple[..rank].to_vec(), amp);
        } else {
            outside += amp.norm_sqr();
        }
    });
    let residual = outside.sqrt();
    if residual > opts.tau_comp {
        return Err(RankError::CompressionResidual {
            residual,
            tau_comp: opts.tau_comp,
            rank,
            leak,
        });
    }

    let phi = if rank == 0 {
        None
    } else {
        Some(FockState::from_amplitudes(rank, rotated.cutoff(), kept)?.normalized()?)
    };

    // Round-trip check: rebuild G (core (x) vacuum) and compare.
    let base = match &phi {
        None => FockState::vacuum(n, rotated.cutoff()),
        Some(core) if rank == n => core.clone(),
        Some(core) => core.tensor(&FockState::vacuum(n - rank, 0)),
    };
    let rebuilt = apply_gaussian(&base, &desc, &opts.gate_options)?;
    leak += rebuilt.leak;
    let reconstruction_fidelity = fidelity_pure(&rebuilt.state, &st)?;

    let core_moment_defect = match &phi {
        None => 0.0,
        Some(core) => {
            let core_moments = fock::moments(core)?;
            let mut defect = core_moments.mean().amax();
            let v = core_moments.covariance();
            for i in 0..2 * rank {
                for j in 0..2 * rank {
                    let expected = if i == j { eigenvalues[i / 2] } else { 0.0 };
                    defect = defect.max((v[(i, j)] - expected).abs());
                }
            }
            defect
        }
    };

    let mean_photon_input = mean_photon_number(&st);
    let mean_photon_core = phi.as_ref().map_or(0.0, mean_photon_number);

    Ok(CompressionResult {
        desc,
        phi,
        rank,
        residual,
        eigenvalues,
        reconstruction_fidelity,
        core_moment_defect,
        mean_photon_input,
        mean_photon_core,
        leak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_compresses_to_rank_zero() {
        let res = compress(&FockState::vacuum(2, 8)).unwrap();
        assert_eq!(res.rank, 0);
        assert!(res.phi.is_none());
        assert!(res.residual < 1e-9, "residual {:.3e}", res.residual);
        assert!(
            res.reconstruction_fidelity > 1.0 - 1e-9,
            "fidelity {}",
            res.reconstruction_fidelity
        );
    }

    #[test]
    fn product_core_is_recovered_in_place() {
        // |1> (x) |0> (x) |0> is already in factored form: G is a gauge
        // rotation, the core is |1>, and nothing is lost.
        let st = FockState::fock(&[1, 0, 0], 10).unwrap();
        let res = compress(&st).unwrap();
        assert_eq!(res.rank, 1);
        assert!(res.residual < 1e-9, "residual {:.3e}", res.residual);
        let phi = res.phi.expect("rank-1 core");
        assert_eq!(phi.n_modes(), 1);
        let one = FockState::fock(&[1], phi.cutoff()).unwrap();
        let f = fidelity_pure(&phi, &one).unwrap();
        assert!(f > 1.0 - 1e-9, "core fidelity with |1>: {f}");
    }
}
