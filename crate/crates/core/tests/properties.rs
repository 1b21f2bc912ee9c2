//! Property tests for the structural invariants: exchange symmetry,
//! parameterisation round-trips, normalization contracts, and the
//! model-specific map structure.

use proptest::prelude::*;
use std::f64::consts::PI;

use noonlith::{
    boto_coincidence, detection_amplitude, gaussian, steuernagel_coincidence, BiphotonSlitState,
    DetectorGrid, GaussianNoonSetup, Normalization, ScanModel, SlitGeometry,
};

fn any_geometry() -> impl Strategy<Value = (SlitGeometry, DetectorGrid)> {
    // Fringe counts from 0.5 to 12 on grids of 11..=81 detectors.
    (1u32..=24, 5u32..=40, 1e-6f64..1e-4).prop_map(|(half_fringes, half_s, b)| {
        let grid = DetectorGrid::new(2 * half_s, b).unwrap();
        let geom =
            SlitGeometry::for_fringe_count(half_fringes as f64 / 2.0, &grid).unwrap();
        (geom, grid)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alpha_phi_round_trip_is_identity(
        alpha in 0.02f64..(2.0 * PI - 0.02),
        phi in 0.0f64..(2.0 * PI - 1e-9),
    ) {
        let state = BiphotonSlitState::from_alpha_phi(alpha, phi);
        let (c11, c12, c21, c22) = state.amplitudes();
        let back = BiphotonSlitState::from_raw(c11, c12, c21, c22).unwrap();
        prop_assert!((back.alpha() - alpha).abs() < 1e-12);
        let dphi = (back.phi() - phi).rem_euclid(2.0 * PI);
        prop_assert!(dphi.min(2.0 * PI - dphi) < 1e-12);
    }

    #[test]
    fn detection_amplitude_is_exchange_symmetric(
        alpha in 0.0f64..(2.0 * PI),
        phi in 0.0f64..(2.0 * PI),
        x1 in -3e-3f64..3e-3,
        x2 in -3e-3f64..3e-3,
    ) {
        let geom = SlitGeometry::new(1e-3, 0.0, 1.0, 2.0 * PI / 1e-6).unwrap();
        let det = detection_amplitude(BiphotonSlitState::from_alpha_phi(alpha, phi), geom);
        let a = det.psi(x1, x2).norm();
        let b = det.psi(x2, x1).norm();
        let scale = a.max(b).max(f64::MIN_POSITIVE);
        prop_assert!((a - b).abs() <= 1e-12 * scale);
    }

    #[test]
    fn global_phase_leaves_probabilities_alone(
        alpha in 0.1f64..(2.0 * PI - 0.1),
        phi in 0.0f64..(2.0 * PI),
        chi in 0.0f64..(2.0 * PI),
        x1 in -2e-3f64..2e-3,
        x2 in -2e-3f64..2e-3,
    ) {
        let geom = SlitGeometry::new(1e-3, 0.0, 0.8, 2.0 * PI / 1.2e-6).unwrap();
        let base = BiphotonSlitState::from_alpha_phi(alpha, phi);
        let (c11, c12, c21, c22) = base.amplitudes();
        let rot = num_complex::Complex64::from_polar(1.0, chi);
        let rotated = BiphotonSlitState::from_raw(
            c11 * rot, c12 * rot, c21 * rot, c22 * rot).unwrap();
        let p = detection_amplitude(base, geom).probability(x1, x2);
        let q = detection_amplitude(rotated, geom).probability(x1, x2);
        let scale = p.max(q).max(f64::MIN_POSITIVE);
        prop_assert!((p - q).abs() <= 1e-12 * scale);
    }

    #[test]
    fn coincidence_maps_obey_their_contracts((geom, grid) in any_geometry()) {
        let n = grid.detectors();

        let sticking = boto_coincidence(&geom, &grid, Normalization::UnitSum);
        let total: f64 = noonlith::quadrature::pairwise_sum(sticking.values());
        prop_assert!((total - 1.0).abs() <= 1e-12);
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    prop_assert_eq!(sticking.get(i, j), 0.0);
                }
            }
        }

        let indep = steuernagel_coincidence(&geom, &grid, Normalization::UnitMax);
        let peak = indep.values().iter().cloned().fold(0.0f64, f64::max);
        prop_assert!((peak - 1.0).abs() <= 1e-12);
        // Exchange symmetry and dependence on s+t only.
        for i in 0..n {
            for j in 0..n {
                prop_assert!((indep.get(i, j) - indep.get(j, i)).abs() <= 1e-12);
                if i + 1 < n && j > 0 {
                    prop_assert!((indep.get(i, j) - indep.get(i + 1, j - 1)).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn models_share_the_diagonal((geom, grid) in any_geometry()) {
        let a = boto_coincidence(&geom, &grid, Normalization::UnitMax);
        let b = steuernagel_coincidence(&geom, &grid, Normalization::UnitMax);
        for (x, y) in a.diagonal().iter().zip(b.diagonal()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn scans_never_exceed_their_envelope(
        waist_mm in 0.05f64..5.0,
        distance in 0.05f64..5.0,
        angle in 0.05f64..1.5,
        photons in 1u32..5,
        cubic in any::<bool>(),
    ) {
        let setup = GaussianNoonSetup::new(
            waist_mm * 1e-3, distance, angle, 1e-6, photons).unwrap();
        let span = 40.0 * 1e-6;
        let sc = gaussian::scan(&setup, ScanModel::Noon, -span, span, 401, cubic).unwrap();
        for (v, e) in sc.values().iter().zip(sc.envelope()) {
            prop_assert!(*v >= 0.0 && *v <= e + 1e-12);
        }
        let sd = gaussian::scan(&setup, ScanModel::Delta, -span, span, 401, false).unwrap();
        for (v, e) in sd.values().iter().zip(sd.envelope()) {
            prop_assert!(*v >= 0.0 && *v <= e + 1e-12);
        }
    }

    #[test]
    fn pair_forms_peak_on_the_antidiagonal(
        x in 1e-7f64..1e-4,
        waist_mm in 0.1f64..2.0,
    ) {
        let setup = GaussianNoonSetup::new(waist_mm * 1e-3, 0.5, PI / 6.0, 1e-6, 2).unwrap();
        // x1 = -x2: the cosine factor is 1, so the value equals the envelope.
        let p = gaussian::noon_pair_coincidence(&setup, x, -x);
        let env = (-2.0 * GaussianNoonSetup { photons: 1, ..setup }
            .envelope_coefficient(ScanModel::Noon) * x * x).exp();
        prop_assert!((p - env).abs() <= 1e-12 * env.max(1e-300));
        prop_assert_eq!(gaussian::delta_pair_coincidence(&setup, x, -x), 1.0);
    }
}
