//! Moment-level state evolution, energy accounting, normal modes, and
//! Gaussian overlaps checked against closed-form single- and two-mode
//! fixtures plus seeded random roundtrips.

mod common;

use approx::{assert_abs_diff_eq, assert_relative_eq};
use common::{max_abs_diff, random_desc, random_pure_state};
use gaussian::{
    apply_to_moments, energy_and_photon, log_negativity, normal_mode_decomposition, pure_fidelity,
    purity_defect, GaussianMoments, GaussianParams, GaussianUnitaryDesc,
};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symplectic_core::Tolerances;

/// Two-mode squeezed vacuum with parameter `r`, modes interleaved as
/// `(x1, p1, x2, p2)`.
fn tmsv(r: f64) -> GaussianMoments {
    let c = (2.0 * r).cosh();
    let s = (2.0 * r).sinh();
    let v = DMatrix::from_row_slice(
        4,
        4,
        &[
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, -s, //
            s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ],
    );
    GaussianMoments::new(DVector::zeros(4), v, &Tolerances::default())
        .expect("two-mode squeezed vacuum is a valid state")
}

/// Single-mode squeezer with squeezing `xi` (no rotation, no displacement).
fn squeezer(xi: f64) -> GaussianUnitaryDesc {
    let params = GaussianParams::new(
        DMatrix::identity(1, 1),
        DMatrix::identity(1, 1),
        DVector::from_element(1, xi),
        DVector::zeros(1),
    )
    .expect("valid single-mode parameters");
    gaussian::params_to_desc(&params, &Tolerances::default()).expect("squeezer is symplectic")
}

#[test]
fn identity_leaves_moments_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let st = random_pure_state(&mut rng, 3, 0.8, 1.0);
    let id = GaussianUnitaryDesc::identity(3);
    let out = apply_to_moments(&id, &st).expect("dimensions agree");
    assert!(
        max_abs_diff(out.covariance(), st.covariance()) < 1e-14,
        "identity changed the covariance"
    );
    assert!(
        (out.mean() - st.mean()).amax() < 1e-14,
        "identity changed the mean"
    );
}

#[test]
fn displacement_shifts_mean_only() {
    let r = DVector::from_row_slice(&[0.3, -0.7, 1.1, 0.2]);
    let d = GaussianUnitaryDesc::displacement(r.clone()).expect("even-length displacement");
    let out = apply_to_moments(&d, &GaussianMoments::vacuum(2)).expect("dimensions agree");
    assert!(
        (out.mean() - &r).amax() < 1e-14,
        "displaced vacuum mean should equal the displacement vector"
    );
    assert!(
        max_abs_diff(out.covariance(), &DMatrix::identity(4, 4)) < 1e-14,
        "displacement must not touch the covariance"
    );
}

#[test]
fn squeezed_vacuum_covariance_is_diagonal() {
    let xi = 0.6;
    let out = apply_to_moments(&squeezer(xi), &GaussianMoments::vacuum(1)).expect("one mode");
    let expected = DMatrix::from_diagonal(&DVector::from_row_slice(&[
        (2.0 * xi).exp(),
        (-2.0 * xi).exp(),
    ]));
    assert!(
        max_abs_diff(out.covariance(), &expected) < 1e-12,
        "squeezed vacuum covariance should be diag(e^(2 xi), e^(-2 xi))"
    );
}

#[test]
fn composition_matches_sequential_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let tol = Tolerances::default();
    for case in 0..100 {
        let n = 1 + (case % 3);
        let g1 = random_desc(&mut rng, n, 0.9, 1.0);
        let g2 = random_desc(&mut rng, n, 0.9, 1.0);
        let st = random_pure_state(&mut rng, n, 0.7, 0.8);

        let sequential =
            apply_to_moments(&g2, &apply_to_moments(&g1, &st).unwrap()).expect("dims agree");
        let composed =
            apply_to_moments(&g2.compose(&g1).unwrap(), &st).expect("composition keeps dims");

        assert!(
            max_abs_diff(sequential.covariance(), composed.covariance()) < 1e-9,
            "case {case}: covariance disagrees between composed and sequential application"
        );
        assert!(
            (sequential.mean() - composed.mean()).amax() < 1e-9,
            "case {case}: mean disagrees between composed and sequential application"
        );
        let _ = tol;
    }
}

#[test]
fn energy_and_photon_fixtures() {
    // (state, mean energy, mean photon number)
    let beta = Complex64::new(0.5, -0.3);
    let coherent = apply_to_moments(
        &GaussianUnitaryDesc::displacement(DVector::from_row_slice(&[
            2f64.sqrt() * beta.re,
            2f64.sqrt() * beta.im,
        ]))
        .unwrap(),
        &GaussianMoments::vacuum(1),
    )
    .unwrap();
    let xi = 0.8;
    let squeezed = apply_to_moments(&squeezer(xi), &GaussianMoments::vacuum(1)).unwrap();
    let one_photon_moments = GaussianMoments::new(
        DVector::zeros(2),
        DMatrix::identity(2, 2) * 3.0,
        &Tolerances::default(),
    )
    .unwrap();

    let cases: Vec<(&str, GaussianMoments, f64, f64)> = vec![
        ("vacuum", GaussianMoments::vacuum(2), 1.0, 0.0),
        ("coherent", coherent, 0.5 + beta.norm_sqr(), beta.norm_sqr()),
        ("squeezed", squeezed, 0.5 + xi.sinh().powi(2), xi.sinh().powi(2)),
        ("moments of |1>", one_photon_moments, 1.5, 1.0),
    ];
    for (name, st, energy, photon) in cases {
        let ep = energy_and_photon(&st);
        assert_relative_eq!(ep.mean_energy, energy, max_relative = 1e-12);
        assert_abs_diff_eq!(ep.mean_photon, photon, epsilon = 1e-12);
        let _ = name;
    }
}

#[test]
fn normal_modes_of_thermal_states() {
    let tol = Tolerances::default();
    let st = GaussianMoments::thermal(&[1.25, 0.0, 0.4]);
    let nm = normal_mode_decomposition(&st, &tol).expect("thermal covariance is symplectic-plain");
    let mut nu = nm.nu.clone();
    nu.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (got, want) in nu.iter().zip([0.0, 0.4, 1.25]) {
        assert_abs_diff_eq!(*got, want, epsilon = 1e-10);
    }
    let rec = nm.reconstruct();
    assert!(
        max_abs_diff(rec.covariance(), st.covariance()) < 1e-8,
        "normal-mode reconstruction drifted from the thermal covariance"
    );
}

#[test]
fn normal_modes_roundtrip_random_mixed_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let tol = Tolerances::default();
    for case in 0..25 {
        let n = 1 + (case % 4);
        let g = random_desc(&mut rng, n, 0.8, 1.0);
        let nus: Vec<f64> = (0..n).map(|i| 0.3 * ((case + i) % 3) as f64).collect();
        let st = apply_to_moments(&g, &GaussianMoments::thermal(&nus)).unwrap();

        let nm = normal_mode_decomposition(&st, &tol).expect("valid mixed Gaussian state");
        let rec = nm.reconstruct();
        assert!(
            max_abs_diff(rec.covariance(), st.covariance()) < 1e-8,
            "case {case}: reconstructed covariance drifted"
        );
        assert!(
            (rec.mean() - st.mean()).amax() < 1e-12,
            "case {case}: reconstructed mean drifted"
        );

        let mut got: Vec<f64> = nm.nu.clone();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want = nus.clone();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(want) {
            assert_abs_diff_eq!(*g, w, epsilon = 1e-8);
        }
    }
}

#[test]
fn pure_states_have_zero_purity_defect() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let tol = Tolerances::default();
    for case in 0..20 {
        let n = 1 + (case % 3);
        let st = random_pure_state(&mut rng, n, 1.0, 1.0);
        let defect = purity_defect(&st, &tol).expect("valid pure state");
        assert!(
            defect.abs() < 1e-8,
            "case {case}: pure state reported purity defect {defect:.3e}"
        );
    }
    let thermal = GaussianMoments::thermal(&[0.5]);
    let defect = purity_defect(&thermal, &tol).unwrap();
    assert_abs_diff_eq!(defect, 1.0, epsilon = 1e-10); // d = 2 nu + 1 = 2
}

#[test]
fn conditioning_one_arm_of_a_two_mode_squeezed_state_gives_vacuum() {
    let st = tmsv(0.7);
    let out = st.condition_on_vacuum(&[0]).expect("mode 0 exists");
    assert_eq!(out.n_modes(), 1, "one mode should remain");
    assert!(
        max_abs_diff(out.covariance(), &DMatrix::identity(2, 2)) < 1e-12,
        "vacuum outcome on one arm should project the other arm to vacuum"
    );
    assert!(out.mean().amax() < 1e-12, "conditioned mean should vanish");
}

#[test]
fn pure_fidelity_fixtures() {
    let tol = Tolerances::default();
    let vac1 = GaussianMoments::vacuum(1);

    assert_relative_eq!(pure_fidelity(&vac1, &vac1).unwrap(), 1.0, max_relative = 1e-12);

    let beta_sq = 0.3f64.powi(2) + 0.8f64.powi(2);
    let coherent = apply_to_moments(
        &GaussianUnitaryDesc::displacement(DVector::from_row_slice(&[
            2f64.sqrt() * 0.3,
            2f64.sqrt() * 0.8,
        ]))
        .unwrap(),
        &vac1,
    )
    .unwrap();
    assert_relative_eq!(
        pure_fidelity(&vac1, &coherent).unwrap(),
        (-beta_sq).exp(),
        max_relative = 1e-12
    );

    let xi = 0.9;
    let squeezed = apply_to_moments(&squeezer(xi), &vac1).unwrap();
    assert_relative_eq!(
        pure_fidelity(&vac1, &squeezed).unwrap(),
        1.0 / xi.cosh(),
        max_relative = 1e-12
    );

    let r = 0.55;
    assert_relative_eq!(
        pure_fidelity(&GaussianMoments::vacuum(2), &tmsv(r)).unwrap(),
        1.0 / r.cosh().powi(2),
        max_relative = 1e-12
    );
    let _ = tol;
}

#[test]
fn pure_fidelity_is_symmetric_and_unitarily_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for case in 0..20 {
        let n = 1 + (case % 2);
        let a = random_pure_state(&mut rng, n, 0.8, 0.8);
        let b = random_pure_state(&mut rng, n, 0.8, 0.8);
        let g = random_desc(&mut rng, n, 0.8, 0.8);

        let f_ab = pure_fidelity(&a, &b).unwrap();
        let f_ba = pure_fidelity(&b, &a).unwrap();
        assert_relative_eq!(f_ab, f_ba, max_relative = 1e-10);

        let ga = apply_to_moments(&g, &a).unwrap();
        let gb = apply_to_moments(&g, &b).unwrap();
        let f_g = pure_fidelity(&ga, &gb).unwrap();
        assert!(
            (f_ab - f_g).abs() < 1e-9 * f_ab.max(1e-3),
            "case {case}: overlap not invariant under a common unitary ({f_ab} vs {f_g})"
        );
    }
}

#[test]
fn log_negativity_of_two_mode_squeezed_state() {
    let tol = Tolerances::default();
    for r in [0.0, 0.25, 0.7, 1.2] {
        let ln = log_negativity(&tmsv(r), &[0], &tol).expect("two modes");
        assert_abs_diff_eq!(ln, 2.0 * r, epsilon = 1e-9);
    }
}

#[test]
fn log_negativity_vanishes_for_products_and_respects_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let tol = Tolerances::default();

    // Product of two random single-mode pure states: no entanglement.
    for case in 0..10 {
        let a = random_pure_state(&mut rng, 1, 1.0, 1.0);
        let b = random_pure_state(&mut rng, 1, 1.0, 1.0);
        let mut v = DMatrix::zeros(4, 4);
        v.view_mut((0, 0), (2, 2)).copy_from(a.covariance());
        v.view_mut((2, 2), (2, 2)).copy_from(b.covariance());
        let mut m = DVector::zeros(4);
        m.rows_mut(0, 2).copy_from(a.mean());
        m.rows_mut(2, 2).copy_from(b.mean());
        let st = GaussianMoments::new(m, v, &tol).unwrap();
        let ln = log_negativity(&st, &[0], &tol).unwrap();
        assert!(
            ln < 1e-9,
            "case {case}: product state reported log-negativity {ln:.3e}"
        );
    }

    // Local unitaries leave the log-negativity unchanged.
    let st = tmsv(0.6);
    let ga = random_desc(&mut rng, 1, 0.7, 0.7).embed(0, 2).unwrap();
    let gb = random_desc(&mut rng, 1, 0.7, 0.7).embed(1, 2).unwrap();
    let moved = apply_to_moments(&gb.compose(&ga).unwrap(), &st).unwrap();
    let ln = log_negativity(&moved, &[0], &tol).unwrap();
    assert_abs_diff_eq!(ln, 1.2, epsilon = 1e-9);
}
