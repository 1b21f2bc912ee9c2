//! Cross-validation of the closed-form two-photon detection amplitude
//! against the brute-force propagation oracle, and quadrature checks of
//! the free-space kernel itself.

use num_complex::Complex64;

use noonlith::quadrature::integrate_adaptive;
use noonlith::{
    detection_amplitude, fresnel_propagator, propagate_numeric, relative_l1, slit_amplitudes,
    BiphotonSlitState, DetectorGrid, Normalization, OracleConfig, PumpPhaseMatchProfiles,
    SlitGeometry,
};

const LAMBDA: f64 = 1e-6;

/// 31 detectors spanning 4.5 single-photon fringes of a 1 mm double slit
/// 1 m from the screen.
fn oracle_geometry() -> (SlitGeometry, DetectorGrid) {
    let k = 2.0 * std::f64::consts::PI / LAMBDA;
    let d = 1e-3;
    let r = 1.0;
    let theta = 4.5 * std::f64::consts::PI / 31.0;
    let b = theta * 2.0 * r / (k * d);
    let geom = SlitGeometry::new(d, 2e-5, r, k).unwrap();
    let grid = DetectorGrid::new(30, b).unwrap();
    (geom, grid)
}

/// Propagating dz1 then dz2 must equal propagating dz1+dz2: checked by
/// numerical quadrature on a Gaussian input field.
///
/// The intermediate field is tabulated once on fixed Gauss-Legendre
/// panels (sized well under the local Fresnel oscillation period), and
/// the outer hop integrates over exactly those nodes; the single-hop
/// reference uses the adaptive integrator.
#[test]
fn fresnel_kernel_composes_over_distances() {
    let k = 2.0 * std::f64::consts::PI / LAMBDA;
    let w0 = 5e-4;
    let gaussian = move |x: f64| Complex64::new((-(x / w0).powi(2)).exp(), 0.0);
    let (dz1, dz2) = (0.3, 0.5);
    let bound = 4e-3;

    // After 0.3 m the beam radius is 0.54 mm, so the intermediate field is
    // below e^{-26} of its peak beyond ±2.75 mm; tabulating inside that
    // window keeps the truncation error orders below the 1e-6 target.
    let mid_bound = 2.75e-3;
    let rule = noonlith::quadrature::GaussLegendre::new(16);
    let panels = 200usize;
    let width = 2.0 * mid_bound / panels as f64;
    let mut mid_nodes: Vec<(f64, f64)> = Vec::with_capacity(panels * 16);
    for p in 0..panels {
        let a = -mid_bound + p as f64 * width;
        mid_nodes.extend(rule.scaled(a, a + width));
    }
    let mid_field: Vec<Complex64> = mid_nodes
        .iter()
        .map(|&(x, _)| {
            integrate_adaptive(
                |x0| fresnel_propagator(x, x0, dz1, k).unwrap() * gaussian(x0),
                -bound,
                bound,
                1e-9,
                24,
            )
            .unwrap()
        })
        .collect();

    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..=8 {
        let y = -2e-3 + i as f64 * 5e-4;
        let direct = integrate_adaptive(
            |x| fresnel_propagator(y, x, dz1 + dz2, k).unwrap() * gaussian(x),
            -bound,
            bound,
            1e-9,
            24,
        )
        .unwrap();
        let composed: Complex64 = mid_nodes
            .iter()
            .zip(&mid_field)
            .map(|(&(x, w), f)| fresnel_propagator(y, x, dz2, k).unwrap() * f * w)
            .sum();
        num += (composed - direct).norm_sqr();
        den += direct.norm_sqr();
    }
    let rel_l2 = (num / den).sqrt();
    assert!(rel_l2 < 1e-6, "semigroup violation: rel L2 = {rel_l2:.3e}");
}

#[test]
fn oracle_matches_closed_form_for_same_slit_pairs() {
    let (geom, grid) = oracle_geometry();
    let profiles = PumpPhaseMatchProfiles::gaussian_pump_gaussian_correlation(5e-3, 5e-5).unwrap();
    let state = slit_amplitudes(&profiles, &geom).unwrap();
    assert!(
        (state.alpha() - std::f64::consts::PI).abs() < 1e-3,
        "narrow pair correlation must reach the same-slit state, alpha = {}",
        state.alpha()
    );
    let closed = detection_amplitude(state, geom)
        .sample_map(&grid, Normalization::UnitSum)
        .unwrap();
    let oracle = propagate_numeric(
        &profiles,
        &geom,
        0.0,
        geom.screen_distance,
        &grid,
        Normalization::UnitSum,
        &OracleConfig::default(),
    )
    .unwrap();
    let dist = relative_l1(&closed, &oracle);
    assert!(dist < 0.02, "same-slit: relative L1 = {dist:.4}");

    // The ideal-state map agrees as well, since the extracted state is
    // this close to alpha = pi.
    let ideal = detection_amplitude(BiphotonSlitState::from_alpha_phi(std::f64::consts::PI, 0.0), geom)
        .sample_map(&grid, Normalization::UnitSum)
        .unwrap();
    let dist_ideal = relative_l1(&ideal, &oracle);
    assert!(dist_ideal < 0.02, "ideal same-slit: relative L1 = {dist_ideal:.4}");
}

#[test]
fn oracle_matches_closed_form_for_independent_photons() {
    let (geom, grid) = oracle_geometry();
    // w_p = 2σ makes the two Gaussian suppressions cancel: α = π/2 exactly.
    let profiles =
        PumpPhaseMatchProfiles::gaussian_pump_gaussian_correlation(5e-2, 2.5e-2).unwrap();
    let state = slit_amplitudes(&profiles, &geom).unwrap();
    assert!((state.alpha() - std::f64::consts::FRAC_PI_2).abs() < 1e-3);
    let closed = detection_amplitude(state, geom)
        .sample_map(&grid, Normalization::UnitSum)
        .unwrap();
    let oracle = propagate_numeric(
        &profiles,
        &geom,
        0.0,
        geom.screen_distance,
        &grid,
        Normalization::UnitSum,
        &OracleConfig::default(),
    )
    .unwrap();
    let dist = relative_l1(&closed, &oracle);
    assert!(dist < 0.02, "independent: relative L1 = {dist:.4}");
}

/// A short source-to-slit hop must reproduce the at-the-slits limit: the
/// kernel blur sqrt(λ·dz) ≈ 3 µm is far below every structure scale.
#[test]
fn short_source_hop_matches_symbolic_delta_limit() {
    let (geom, grid) = oracle_geometry();
    let profiles = PumpPhaseMatchProfiles::gaussian_pump_gaussian_correlation(5e-3, 5e-5).unwrap();
    let cfg = OracleConfig::default();
    let at_slits = propagate_numeric(
        &profiles,
        &geom,
        0.0,
        geom.screen_distance,
        &grid,
        Normalization::UnitSum,
        &cfg,
    )
    .unwrap();
    let hopped = propagate_numeric(
        &profiles,
        &geom,
        1e-5,
        geom.screen_distance,
        &grid,
        Normalization::UnitSum,
        &cfg,
    )
    .unwrap();
    let dist = relative_l1(&at_slits, &hopped);
    assert!(dist < 0.01, "delta-limit drift: relative L1 = {dist:.4}");
}

/// The slit openings are far narrower than a fringe, so doubling their
/// width must not move the normalized map.
#[test]
fn slit_width_is_immaterial_when_narrow() {
    let (geom, grid) = oracle_geometry();
    let profiles = PumpPhaseMatchProfiles::gaussian_pump_gaussian_correlation(5e-3, 5e-5).unwrap();
    let cfg = OracleConfig::default();
    let narrow = SlitGeometry::new(
        geom.separation,
        1e-5,
        geom.screen_distance,
        geom.wavenumber,
    )
    .unwrap();
    let wide = SlitGeometry::new(
        geom.separation,
        2e-5,
        geom.screen_distance,
        geom.wavenumber,
    )
    .unwrap();
    let a = propagate_numeric(
        &profiles,
        &narrow,
        0.0,
        narrow.screen_distance,
        &grid,
        Normalization::UnitSum,
        &cfg,
    )
    .unwrap();
    let b = propagate_numeric(
        &profiles,
        &wide,
        0.0,
        wide.screen_distance,
        &grid,
        Normalization::UnitSum,
        &cfg,
    )
    .unwrap();
    let dist = relative_l1(&a, &b);
    assert!(dist < 0.01, "slit-width sensitivity: relative L1 = {dist:.4}");
}

/// The independent-propagation closed form on index space equals the
/// same-slit-pair amplitude map on position space, detector by detector.
#[test]
fn steuernagel_map_equals_noon_amplitude_map() {
    let (geom, grid) = oracle_geometry();
    let from_pattern = noonlith::steuernagel_coincidence(&geom, &grid, Normalization::UnitMax);
    let from_amplitude =
        detection_amplitude(BiphotonSlitState::from_alpha_phi(std::f64::consts::PI, 0.0), geom)
            .sample_map(&grid, Normalization::UnitMax)
            .unwrap();
    for (a, b) in from_pattern.values().iter().zip(from_amplitude.values()) {
        assert!((a - b).abs() < 1e-9);
    }
}
