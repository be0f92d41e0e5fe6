//! Exact symplectic rank and the eigenvalue witness.

mod common;

use common::{dress, lenient_gate_options, mild_desc, two_point_state};
use fock::{DensityOp, FockState};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rank::{
    eigenvalue_witness, symplectic_rank_density, symplectic_rank_pure, RankError,
    DEFAULT_RANK_TOL,
};
use symplectic_core::{symplectic_eigenvalues, Tolerances};

#[test]
fn fock_state_rank_anchors() {
    // (occupation tuple, cutoff, expected rank)
    let table: &[(&[u16], usize, usize)] = &[
        (&[0], 6, 0),
        (&[0, 0, 0], 6, 0),
        (&[2], 8, 1),
        (&[1, 1], 8, 2),
        (&[3], 8, 1),
        (&[1, 0, 2], 10, 2),
        (&[1, 1, 1], 10, 3),
    ];
    for &(tuple, cutoff, expected) in table {
        let st = FockState::fock(tuple, cutoff).expect("tuple within cutoff");
        let rank = symplectic_rank_pure(&st, DEFAULT_RANK_TOL).expect("pure state rank");
        assert_eq!(rank, expected, "rank of |{tuple:?}>");
    }
}

#[test]
fn rank_is_invariant_under_gaussian_dressing() {
    let mut rng = ChaCha12Rng::seed_from_u64(401);
    let opts = lenient_gate_options();
    let cores: &[(&[u16], usize)] = &[(&[1], 1), (&[2], 1), (&[1, 1], 2), (&[0], 0)];
    for &(tuple, expected) in cores {
        let core = FockState::fock(tuple, 4).expect("small tuple");
        for _ in 0..3 {
            let desc = mild_desc(&mut rng, 2, 0.25, 0.5);
            let dressed = dress(&core, 2, 12, &desc, &opts);
            let rank = symplectic_rank_pure(&dressed, DEFAULT_RANK_TOL).expect("dressed rank");
            assert_eq!(
                rank, expected,
                "Gaussian dressing must not change the rank of |{tuple:?}>"
            );
        }
    }
}

#[test]
fn rank_is_additive_on_tensor_products() {
    let mut rng = ChaCha12Rng::seed_from_u64(402);
    let opts = lenient_gate_options();
    let parts: &[(&[u16], usize)] = &[(&[0], 0), (&[1], 1), (&[2], 1), (&[1, 1], 2)];
    for &(ta, ra) in parts {
        for &(tb, rb) in parts {
            let a = dress(
                &FockState::fock(ta, 4).expect("tuple a"),
                ta.len(),
                10,
                &mild_desc(&mut rng, ta.len(), 0.2, 0.4),
                &opts,
            );
            let b = dress(
                &FockState::fock(tb, 4).expect("tuple b"),
                tb.len(),
                10,
                &mild_desc(&mut rng, tb.len(), 0.2, 0.4),
                &opts,
            );
            let joint = a.tensor(&b);
            let rank = symplectic_rank_pure(&joint, DEFAULT_RANK_TOL).expect("tensor rank");
            assert_eq!(
                rank,
                ra + rb,
                "rank additivity failed for |{ta:?}> (x) |{tb:?}>"
            );
        }
    }
}

#[test]
fn rank_zero_exactly_for_gaussian_states() {
    let mut rng = ChaCha12Rng::seed_from_u64(403);
    let opts = lenient_gate_options();
    for n in 1..=3usize {
        let vac = FockState::vacuum(n, 12);
        let desc = mild_desc(&mut rng, n, 0.3, 0.6);
        let gaussian = dress(&vac, n, 12, &desc, &opts);
        assert_eq!(
            symplectic_rank_pure(&gaussian, DEFAULT_RANK_TOL).expect("gaussian rank"),
            0,
            "Gaussian states have rank zero (n = {n})"
        );
    }
    // Any single excited core mode forces a strictly positive rank.
    let excited = FockState::fock(&[1, 0], 10).expect("one photon");
    let dressed = dress(&excited, 2, 10, &mild_desc(&mut rng, 2, 0.3, 0.5), &opts);
    assert!(
        symplectic_rank_pure(&dressed, DEFAULT_RANK_TOL).expect("dressed rank") >= 1,
        "a non-Gaussian state must have positive rank"
    );
}

#[test]
fn mixed_states_are_rejected_with_purity_diagnostics() {
    let a = FockState::fock(&[0], 4).expect("vacuum");
    let b = FockState::fock(&[1], 4).expect("one photon");
    let rho = DensityOp::mixture(&[(0.5, a.clone()), (0.5, b)]).expect("valid mixture");
    let err = symplectic_rank_density(&rho, DEFAULT_RANK_TOL)
        .expect_err("a balanced mixture is far from pure");
    match err {
        RankError::MixedStateUnsupported { purity_defect } => assert!(
            purity_defect > 0.4,
            "balanced two-state mixture has purity 1/2, got defect {purity_defect}"
        ),
        other => panic!("expected the mixed-state error, got {other}"),
    }
    let pure = DensityOp::from_pure(&a).expect("pure projector");
    assert_eq!(
        symplectic_rank_density(&pure, DEFAULT_RANK_TOL).expect("pure density accepted"),
        0,
        "vacuum projector has rank zero"
    );
}

#[test]
fn witness_counts_drop_as_epsilon_grows() {
    let mut rng = ChaCha12Rng::seed_from_u64(404);
    let opts = lenient_gate_options();
    let core = FockState::fock(&[2, 1], 6).expect("two excited modes");
    let st = dress(&core, 2, 12, &mild_desc(&mut rng, 2, 0.2, 0.4), &opts);
    let rank = symplectic_rank_pure(&st, DEFAULT_RANK_TOL).expect("exact rank");
    assert_eq!(rank, 2, "both core modes are excited");

    let mut last = usize::MAX;
    for eps in [1e-3, 0.05, 0.3, 0.9] {
        let t = eigenvalue_witness(&st, eps).expect("witness in range");
        assert!(
            t <= last,
            "witness must be non-increasing in epsilon: t({eps}) = {t} > {last}"
        );
        assert!(
            t <= rank,
            "witness with threshold above the rank tolerance cannot exceed the exact rank"
        );
        last = t;
    }
    // Excited symplectic eigenvalues sit at 3 and 5, far above 1 + 2e-3.
    assert_eq!(
        eigenvalue_witness(&st, 1e-3).expect("small epsilon"),
        rank,
        "a small epsilon threshold separates genuinely excited eigenvalues"
    );
}

#[test]
fn witness_rejects_epsilon_outside_unit_interval() {
    let st = FockState::fock(&[1], 4).expect("one photon");
    assert!(matches!(
        eigenvalue_witness(&st, -0.1),
        Err(RankError::InvalidEpsilon { .. })
    ));
    assert!(matches!(
        eigenvalue_witness(&st, 1.5),
        Err(RankError::InvalidEpsilon { .. })
    ));
}

/// `sqrt(1 - e^2) |0> + e |m>` has a single symplectic eigenvalue at
/// exactly `1 + 2 e^2 m`: the cross terms of the covariance vanish for
/// `m >= 3`, leaving `(1 + 2 e^2 m) I`. The exact rank is 1 for any
/// `e > 0`, yet the witness certifies approximate rank zero already at
/// epsilon of order `e^2 m`.
#[test]
fn weak_spike_state_eigenvalue_scaling() {
    let eps = 0.05f64;
    let m = 20u16; // ceil(1 / eps)
    let st = two_point_state(&[m], eps * eps, 24);
    let expected_d = 1.0 + 2.0 * eps * eps * f64::from(m);

    let moments = fock::moments(&st).expect("finite moments");
    let d = symplectic_eigenvalues(moments.covariance(), &Tolerances::default())
        .expect("valid covariance");
    assert_eq!(d.len(), 1);
    assert!(
        (d[0] - expected_d).abs() < 1e-9,
        "spike eigenvalue: got {}, expected {expected_d}",
        d[0]
    );

    assert_eq!(
        symplectic_rank_pure(&st, DEFAULT_RANK_TOL).expect("exact rank"),
        1,
        "the spike is non-Gaussian, so its exact rank is 1"
    );
    // Threshold 1 + 2 eps' crosses the eigenvalue at eps' = e^2 m = 0.05.
    assert_eq!(
        eigenvalue_witness(&st, 0.04).expect("below the crossing"),
        1
    );
    assert_eq!(
        eigenvalue_witness(&st, 0.05).expect("at the crossing"),
        0,
        "witness certifies approximate rank zero once 2 eps' >= d - 1"
    );
}
