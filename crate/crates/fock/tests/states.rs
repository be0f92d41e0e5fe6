//! Constructors, overlaps, and moment extraction for truncated states.

mod common;

use approx::assert_abs_diff_eq;
use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symplectic_core::C64;

use common::{c, random_state};
use fock::{fidelity_pure, mean_photon_number, moments, overlap, simplex_dim, FockState};

#[test]
fn vacuum_has_unit_amplitude_at_zero_tuple() {
    let vac = FockState::vacuum(2, 6);
    assert_eq!(vac.support_size(), 1);
    assert_abs_diff_eq!(vac.amplitude(&[0, 0]).re, 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(vac.norm(), 1.0, epsilon = 1e-15);
}

#[test]
fn fock_state_has_unit_amplitude_at_its_tuple() {
    let st = FockState::fock(&[1, 1], 6).expect("within cutoff");
    assert_abs_diff_eq!(st.amplitude(&[1, 1]).re, 1.0, epsilon = 1e-15);
    assert_eq!(st.support_size(), 1);
    assert!(
        FockState::fock(&[4, 3], 6).is_err(),
        "tuple beyond the cutoff must be rejected"
    );
}

#[test]
fn coherent_amplitudes_match_poisson_expansion() {
    let beta = DVector::from_element(1, c(1.0, 0.0));
    let st = FockState::coherent(&beta, 20, 1e-8).expect("cutoff 20 is ample for beta=1");
    for k in 0..=6u16 {
        let mut fact = 1.0;
        for i in 1..=k as usize {
            fact *= i as f64;
        }
        let expected = (-0.5f64).exp() / fact.sqrt();
        assert_abs_diff_eq!(st.amplitude(&[k]).re, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(st.amplitude(&[k]).im, 0.0, epsilon = 1e-15);
    }
    assert_abs_diff_eq!(st.norm(), 1.0, epsilon = 1e-12);
}

#[test]
fn coherent_raises_cutoff_to_meet_leak_budget() {
    let beta = DVector::from_element(1, c(2.0, 0.0));
    // Cutoff 4 is far too small for |beta|^2 = 4; the constructor must grow it.
    let st = FockState::coherent(&beta, 4, 1e-8).expect("auto-raise succeeds");
    assert!(
        st.cutoff() > 4,
        "cutoff should have been raised beyond 4, got {}",
        st.cutoff()
    );
    assert!(st.last_leak() <= 1e-8, "leak {} over budget", st.last_leak());
    assert_abs_diff_eq!(st.norm(), 1.0, epsilon = 1e-12);
}

#[test]
fn overlap_of_coherent_states_matches_closed_form() {
    let b1 = c(0.7, -0.2);
    let b2 = c(-0.3, 0.5);
    let s1 = FockState::coherent(&DVector::from_element(1, b1), 40, 1e-10).unwrap();
    let s2 = FockState::coherent(&DVector::from_element(1, b2), 40, 1e-10).unwrap();
    let got = overlap(&s1, &s2).expect("same mode count");
    // <b1|b2> = exp(-|b1|^2/2 - |b2|^2/2 + conj(b1) b2)
    let expected =
        (b1.conj() * b2 - c(0.5 * (b1.norm_sqr() + b2.norm_sqr()), 0.0)).exp();
    assert_abs_diff_eq!(got.re, expected.re, epsilon = 1e-10);
    assert_abs_diff_eq!(got.im, expected.im, epsilon = 1e-10);
    assert_abs_diff_eq!(
        fidelity_pure(&s1, &s2).unwrap(),
        expected.norm_sqr(),
        epsilon = 1e-10
    );
}

#[test]
fn overlap_tolerates_mismatched_cutoffs() {
    let a = FockState::fock(&[2], 4).unwrap();
    let b = FockState::fock(&[2], 9).unwrap();
    assert_abs_diff_eq!(overlap(&a, &b).unwrap().re, 1.0, epsilon = 1e-15);
    assert!(overlap(&a, &FockState::vacuum(2, 4)).is_err());
}

#[test]
fn vacuum_moments_are_zero_mean_identity_covariance() {
    let st = FockState::vacuum(3, 4);
    let mom = moments(&st).expect("vacuum is normalized");
    assert_abs_diff_eq!(mom.mean().amax(), 0.0, epsilon = 1e-14);
    assert_abs_diff_eq!(
        (mom.covariance() - DMatrix::<f64>::identity(6, 6)).amax(),
        0.0,
        epsilon = 1e-14
    );
}

#[test]
fn number_state_moments_are_isotropic() {
    // |n> has zero mean and V = (2n+1) I.
    for n in 1..=4u16 {
        let st = FockState::fock(&[n], 12).unwrap();
        let mom = moments(&st).unwrap();
        assert_abs_diff_eq!(mom.mean().amax(), 0.0, epsilon = 1e-13);
        let expected = DMatrix::<f64>::identity(2, 2) * (2.0 * n as f64 + 1.0);
        assert_abs_diff_eq!(
            (mom.covariance() - expected).amax(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(mean_photon_number(&st), n as f64, epsilon = 1e-12);
    }
}

#[test]
fn coherent_moments_displace_the_vacuum() {
    let beta = c(0.4, -0.9);
    let st = FockState::coherent(&DVector::from_element(1, beta), 30, 1e-10).unwrap();
    let mom = moments(&st).unwrap();
    assert_abs_diff_eq!(mom.mean()[0], 2f64.sqrt() * beta.re, epsilon = 1e-9);
    assert_abs_diff_eq!(mom.mean()[1], 2f64.sqrt() * beta.im, epsilon = 1e-9);
    assert_abs_diff_eq!(
        (mom.covariance() - DMatrix::<f64>::identity(2, 2)).amax(),
        0.0,
        epsilon = 1e-9
    );
    assert_abs_diff_eq!(
        mean_photon_number(&st),
        beta.norm_sqr(),
        epsilon = 1e-9
    );
}

#[test]
fn tensor_concatenates_modes() {
    let one = FockState::fock(&[1], 5).unwrap();
    let two = FockState::fock(&[2], 5).unwrap();
    let joint = one.tensor(&two);
    assert_eq!(joint.n_modes(), 2);
    assert_abs_diff_eq!(joint.amplitude(&[1, 2]).re, 1.0, epsilon = 1e-15);
    assert_abs_diff_eq!(joint.norm(), 1.0, epsilon = 1e-15);
}

#[test]
fn dense_and_sparse_storage_agree_on_norm_and_amplitudes() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    // Fill most of a small basis so the dense representation is selected.
    let dim = simplex_dim(2, 4);
    let st = random_state(&mut rng, 2, 4, dim - 2);
    assert!(st.is_dense(), "expected dense storage at {} of {dim} tuples", dim - 2);
    let mapped = FockState::from_amplitudes(2, 4, st.to_map()).unwrap();
    assert_abs_diff_eq!(st.norm(), mapped.norm(), epsilon = 1e-14);
    let got = overlap(&st, &mapped).unwrap();
    assert_abs_diff_eq!(got.re, 1.0, epsilon = 1e-12);
}

#[test]
fn zero_state_is_rejected_by_normalized() {
    let empty = FockState::from_amplitudes(1, 3, std::collections::HashMap::new()).unwrap();
    assert!(empty.normalized().is_err());
    assert!(moments(&empty).is_err());
}

#[test]
fn random_superposition_energy_matches_hand_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let st = random_state(&mut rng, 2, 6, 5);
        let mut expected = 0.0;
        st.for_each(|t, amp| {
            expected += (t[0] as f64 + t[1] as f64) * amp.norm_sqr();
        });
        assert_abs_diff_eq!(mean_photon_number(&st), expected, epsilon = 1e-12);
    }
}

#[test]
fn moments_of_single_photon_superposition_show_coherences() {
    // (|0> + |1>)/sqrt(2): <x> = sqrt(2) Re<a> = sqrt(2) * 1/2.
    let mut amps = std::collections::HashMap::new();
    amps.insert(vec![0u16], c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    amps.insert(vec![1u16], c(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    let st = FockState::from_amplitudes(1, 4, amps).unwrap();
    let mom = moments(&st).unwrap();
    assert_abs_diff_eq!(mom.mean()[0], std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-13);
    assert_abs_diff_eq!(mom.mean()[1], 0.0, epsilon = 1e-13);
}
