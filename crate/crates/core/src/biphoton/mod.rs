//! Two-photon propagation from the slit plane to the detection plane.
//!
//! The closed form expands the detection amplitude over the four
//! slit-pair propagator products with the symmetric amplitudes c̃ij; the
//! numerical oracle in [`oracle`] re-derives the same maps from pump and
//! phase-matching profiles by brute-force quadrature, with no delta-slit
//! shortcut, so the two routes can be cross-validated.

mod profiles;
pub mod oracle;

pub use oracle::{propagate_numeric, relative_l1, OracleConfig};
pub use profiles::{
    slit_amplitude_integrals, slit_amplitudes, MomentumSupport, PumpPhaseMatchProfiles,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DetectorGrid, SlitGeometry};
use crate::pattern::{CoincidenceMap, Normalization};

/// Default relative tolerance for the c11 = c22, c12 = c21 symmetry check
/// on raw amplitudes.
pub const RAW_SYMMETRY_TOL: f64 = 1e-9;

/// One-dimensional paraxial free-space kernel
/// h(x, x') = sqrt(-i/(λ·dz)) · exp(iπ(x-x')²/(λ·dz)).
///
/// The dz → 0 delta limit is never evaluated numerically; callers handle it
/// symbolically, so `dz` must be strictly positive.
pub fn fresnel_propagator(x_out: f64, x_in: f64, dz: f64, wavenumber: f64) -> Result<Complex64> {
    crate::error::require_positive(dz, "propagation distance")?;
    crate::error::require_positive(wavenumber, "wavenumber")?;
    Ok(fresnel_kernel(x_out, x_in, dz, wavenumber))
}

/// Unchecked kernel evaluation for validated parameters.
#[inline]
pub(crate) fn fresnel_kernel(x_out: f64, x_in: f64, dz: f64, wavenumber: f64) -> Complex64 {
    let lambda = 2.0 * std::f64::consts::PI / wavenumber;
    let amp = (1.0 / (lambda * dz)).sqrt();
    // sqrt(-i) = e^{-iπ/4}
    let root = Complex64::from_polar(amp, -std::f64::consts::FRAC_PI_4);
    let dx = x_out - x_in;
    root * Complex64::from_polar(1.0, std::f64::consts::PI * dx * dx / (lambda * dz))
}

/// Symmetric two-photon amplitude at the slit plane.
///
/// Canonical amplitudes satisfy c̃11 = c̃22 = e^{iφ}·sin(α/2) and
/// c̃12 = c̃21 = cos(α/2) with |c̃11|² + |c̃12|² = 1. α = π is the
/// both-photons-same-slit (NOON) state; α = π/2, φ = 0 is the
/// independent-photons product state; α = 0 is one photon per slit.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BiphotonSlitState {
    /// Amplitude for both photons through the same slit (c̃11 = c̃22).
    #[serde(serialize_with = "serialize_complex")]
    same_slit: Complex64,
    /// Amplitude for one photon through each slit (c̃12 = c̃21).
    #[serde(serialize_with = "serialize_complex")]
    opposite_slit: Complex64,
    alpha: f64,
    phi: f64,
}

fn serialize_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&c.re)?;
    seq.serialize_element(&c.im)?;
    seq.end()
}

impl BiphotonSlitState {
    pub fn from_alpha_phi(alpha: f64, phi: f64) -> Self {
        let same = Complex64::from_polar((alpha / 2.0).sin(), phi);
        let opposite = Complex64::new((alpha / 2.0).cos(), 0.0);
        Self {
            same_slit: same,
            opposite_slit: opposite,
            alpha,
            phi,
        }
    }

    /// Build from raw amplitudes, enforcing the exchange symmetry
    /// c11 = c22 and c12 = c21 within `RAW_SYMMETRY_TOL` (relative).
    pub fn from_raw(c11: Complex64, c12: Complex64, c21: Complex64, c22: Complex64) -> Result<Self> {
        Self::from_raw_with_tol(c11, c12, c21, c22, RAW_SYMMETRY_TOL)
    }

    pub fn from_raw_with_tol(
        c11: Complex64,
        c12: Complex64,
        c21: Complex64,
        c22: Complex64,
        rel_tol: f64,
    ) -> Result<Self> {
        let scale = c11
            .norm()
            .max(c12.norm())
            .max(c21.norm())
            .max(c22.norm());
        if scale <= 0.0 || !scale.is_finite() {
            return Err(Error::InvalidInput(
                "slit amplitudes must be finite and not all zero".into(),
            ));
        }
        if (c11 - c22).norm() > rel_tol * scale {
            return Err(Error::AsymmetricState(format!(
                "c11 = {c11} differs from c22 = {c22} beyond relative tolerance {rel_tol}"
            )));
        }
        if (c12 - c21).norm() > rel_tol * scale {
            return Err(Error::AsymmetricState(format!(
                "c12 = {c12} differs from c21 = {c21} beyond relative tolerance {rel_tol}"
            )));
        }
        let same = 0.5 * (c11 + c22);
        let opposite = 0.5 * (c12 + c21);
        let norm = (same.norm_sqr() + opposite.norm_sqr()).sqrt();
        let mut same = same / norm;
        let mut opposite = opposite / norm;
        // Canonical form keeps c̃12 on the real axis. If it is already real
        // (possibly negative, as produced by α > π), leave the global phase
        // alone so the (α, φ) parameterisation round-trips through the full
        // α ∈ (0, 2π) range; otherwise rotate its phase away.
        if opposite.im.abs() > 1e-14 {
            let rot = Complex64::from_polar(1.0, -opposite.arg());
            same *= rot;
            opposite *= rot;
        }
        let alpha = 2.0 * f64::atan2(same.norm(), opposite.re);
        let phi = if same.norm() > 1e-14 {
            same.arg().rem_euclid(2.0 * std::f64::consts::PI)
        } else {
            0.0
        };
        Ok(Self {
            same_slit: same,
            opposite_slit: opposite,
            alpha,
            phi,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Canonical amplitudes in (c̃11, c̃12, c̃21, c̃22) order.
    pub fn amplitudes(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (
            self.same_slit,
            self.opposite_slit,
            self.opposite_slit,
            self.same_slit,
        )
    }
}

/// Screen-plane two-photon amplitude ψ(x₁, x₂) for a slit state.
#[derive(Debug, Clone, Copy)]
pub struct DetectionAmplitude {
    pub state: BiphotonSlitState,
    pub geometry: SlitGeometry,
}

/// Expand the slit state over the four propagator products:
/// ψ(x₁,x₂) = Σ_{i,j} c̃ij · h(x₁, ±d/2) · h(x₂, ±d/2).
pub fn detection_amplitude(state: BiphotonSlitState, geometry: SlitGeometry) -> DetectionAmplitude {
    DetectionAmplitude { state, geometry }
}

impl DetectionAmplitude {
    pub fn psi(&self, x1: f64, x2: f64) -> Complex64 {
        let half = self.geometry.separation / 2.0;
        let r = self.geometry.screen_distance;
        let k = self.geometry.wavenumber;
        let h1p = fresnel_kernel(x1, half, r, k);
        let h1m = fresnel_kernel(x1, -half, r, k);
        let h2p = fresnel_kernel(x2, half, r, k);
        let h2m = fresnel_kernel(x2, -half, r, k);
        let (c11, c12, c21, c22) = self.state.amplitudes();
        c11 * h1p * h2p + c12 * h1p * h2m + c21 * h1m * h2p + c22 * h1m * h2m
    }

    /// |ψ(x₁, x₂)|², up to the overall proportionality constant.
    pub fn probability(&self, x1: f64, x2: f64) -> f64 {
        self.psi(x1, x2).norm_sqr()
    }

    /// Sample |ψ|² on the detector grid (positions x = s·b).
    pub fn sample_map(&self, grid: &DetectorGrid, norm: Normalization) -> Result<CoincidenceMap> {
        CoincidenceMap::from_fn(grid, norm, |s, t| {
            self.probability(grid.position(s), grid.position(t))
        })
    }
}

/// The six canonical slit states of the coincidence-map gallery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Panel {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Panel {
    pub const ALL: [Panel; 6] = [Panel::A, Panel::B, Panel::C, Panel::D, Panel::E, Panel::F];

    /// The (α, φ) parameters of each panel.
    pub fn alpha_phi(&self) -> (f64, f64) {
        use std::f64::consts::PI;
        match self {
            Panel::A => (PI, 0.0),
            Panel::B => (1.5 * PI, 0.0),
            Panel::C => (0.5 * PI, 0.5 * PI),
            Panel::D => (0.0, 0.0),
            Panel::E => (0.5 * PI, 0.0),
            Panel::F => (0.25 * PI, 0.0),
        }
    }
}

impl std::str::FromStr for Panel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Panel::A),
            "b" => Ok(Panel::B),
            "c" => Ok(Panel::C),
            "d" => Ok(Panel::D),
            "e" => Ok(Panel::E),
            "f" => Ok(Panel::F),
            other => Err(Error::InvalidInput(format!(
                "unknown panel '{other}', expected a..f"
            ))),
        }
    }
}

/// Coincidence map of one gallery panel.
///
/// The grid must span at least four single-photon fringes so the map
/// actually shows the structure being compared.
pub fn panel_map(
    panel: Panel,
    geom: &SlitGeometry,
    grid: &DetectorGrid,
    norm: Normalization,
) -> Result<CoincidenceMap> {
    let theta = crate::pattern::phase_step(geom, grid);
    let fringes = theta * grid.detectors() as f64 / std::f64::consts::PI;
    if fringes < 4.0 {
        return Err(Error::InvalidInput(format!(
            "grid spans only {fringes:.2} single-photon fringes; need at least 4"
        )));
    }
    let (alpha, phi) = panel.alpha_phi();
    detection_amplitude(BiphotonSlitState::from_alpha_phi(alpha, phi), *geom).sample_map(grid, norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn geom() -> SlitGeometry {
        SlitGeometry::new(1e-3, 2e-5, 1.0, 2.0 * PI / 1e-6).unwrap()
    }

    #[test]
    fn propagator_modulus_is_position_independent() {
        let g = geom();
        for (x, x_in) in [(0.0, 0.0), (1e-3, -2e-3), (5e-4, 5e-4), (-3e-3, 1e-3)] {
            let h = fresnel_propagator(x, x_in, g.screen_distance, g.wavenumber).unwrap();
            let expect = 1.0 / (g.wavelength() * g.screen_distance);
            assert!((h.norm_sqr() - expect).abs() / expect < 1e-12);
        }
    }

    #[test]
    fn propagator_phase_at_zero_offset() {
        let h = fresnel_propagator(1e-3, 1e-3, 0.7, 2.0 * PI / 1e-6).unwrap();
        assert!((h.arg() + PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn propagator_rejects_nonpositive_distance() {
        assert!(fresnel_propagator(0.0, 0.0, 0.0, 1e6).is_err());
        assert!(fresnel_propagator(0.0, 0.0, -1.0, 1e6).is_err());
    }

    #[test]
    fn noon_state_gives_sum_coordinate_fringes() {
        let g = geom();
        let det = detection_amplitude(BiphotonSlitState::from_alpha_phi(PI, 0.0), g);
        let kd2r = g.wavenumber * g.separation / (2.0 * g.screen_distance);
        let peak = det.probability(0.0, 0.0);
        for (x1, x2) in [(1e-4, 3e-4), (-2e-4, 5e-4), (7e-4, 7e-4)] {
            let expect = (kd2r * (x1 + x2)).cos().powi(2);
            let got = det.probability(x1, x2) / peak;
            assert!((got - expect).abs() < 1e-12, "({x1},{x2}): {got} vs {expect}");
        }
    }

    #[test]
    fn independent_state_factorises() {
        let g = geom();
        let det = detection_amplitude(BiphotonSlitState::from_alpha_phi(PI / 2.0, 0.0), g);
        let kd2r = g.wavenumber * g.separation / (2.0 * g.screen_distance);
        let peak = det.probability(0.0, 0.0);
        for (x1, x2) in [(1e-4, 3e-4), (-2e-4, 5e-4), (6e-4, -6e-4)] {
            let expect = (kd2r * x1).cos().powi(2) * (kd2r * x2).cos().powi(2);
            let got = det.probability(x1, x2) / peak;
            assert!((got - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn one_photon_per_slit_has_flat_diagonal() {
        let g = geom();
        let det = detection_amplitude(BiphotonSlitState::from_alpha_phi(0.0, 0.0), g);
        let peak = det.probability(0.0, 0.0);
        // Same-position slice is constant...
        for x in [-1e-3, -2e-4, 3e-4, 9e-4] {
            assert!((det.probability(x, x) / peak - 1.0).abs() < 1e-12);
        }
        // ...while a fixed-x2 slice shows single-photon-period fringes.
        let kd2r = g.wavenumber * g.separation / (2.0 * g.screen_distance);
        let x2 = 2e-4;
        for x1 in [0.0, 1e-4, 4e-4, -3e-4] {
            let expect = (kd2r * (x1 - x2)).cos().powi(2);
            assert!((det.probability(x1, x2) / peak - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn raw_state_requires_symmetry() {
        let c = Complex64::new(0.5, 0.0);
        let err = BiphotonSlitState::from_raw(c, c, c, Complex64::new(0.6, 0.0));
        assert!(matches!(err, Err(Error::AsymmetricState(_))));
        let err = BiphotonSlitState::from_raw(c, Complex64::new(0.4, 0.1), c, c);
        assert!(matches!(err, Err(Error::AsymmetricState(_))));
    }

    #[test]
    fn alpha_phi_round_trip_spot_checks() {
        for (alpha, phi) in [
            (0.3, 0.0),
            (PI / 2.0, PI / 2.0),
            (PI, 1.0),
            (1.5 * PI, 0.0),
            (5.9, 4.0),
        ] {
            let s = BiphotonSlitState::from_alpha_phi(alpha, phi);
            let (c11, c12, c21, c22) = s.amplitudes();
            let back = BiphotonSlitState::from_raw(c11, c12, c21, c22).unwrap();
            assert!(
                (back.alpha() - alpha).abs() < 1e-12,
                "alpha {alpha} -> {}",
                back.alpha()
            );
            assert!(
                (back.phi() - phi).rem_euclid(2.0 * PI).min(
                    (2.0 * PI - (back.phi() - phi).rem_euclid(2.0 * PI)).abs()
                ) < 1e-12,
                "phi {phi} -> {}",
                back.phi()
            );
        }
    }

    #[test]
    fn global_phase_does_not_change_the_map() {
        let g = geom();
        let grid = DetectorGrid::new(30, 1e-4).unwrap();
        let base = BiphotonSlitState::from_alpha_phi(0.8, 1.3);
        let (c11, c12, c21, c22) = base.amplitudes();
        let rot = Complex64::from_polar(1.0, 2.1);
        let rotated =
            BiphotonSlitState::from_raw(c11 * rot, c12 * rot, c21 * rot, c22 * rot).unwrap();
        let m1 = detection_amplitude(base, g)
            .sample_map(&grid, Normalization::UnitMax)
            .unwrap();
        let m2 = detection_amplitude(rotated, g)
            .sample_map(&grid, Normalization::UnitMax)
            .unwrap();
        for (a, b) in m1.values().iter().zip(m2.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn panel_requires_enough_fringes() {
        let grid = DetectorGrid::with_detectors(41, 1e-5).unwrap();
        let geom = SlitGeometry::for_fringe_count(2.0, &grid).unwrap();
        assert!(panel_map(Panel::A, &geom, &grid, Normalization::UnitMax).is_err());
    }

    #[test]
    fn panel_a_is_the_sum_coordinate_map() {
        let grid = DetectorGrid::with_detectors(61, 1e-5).unwrap();
        let geom = SlitGeometry::for_fringe_count(4.5, &grid).unwrap();
        let a = panel_map(Panel::A, &geom, &grid, Normalization::UnitMax).unwrap();
        let st = crate::pattern::steuernagel_coincidence(&geom, &grid, Normalization::UnitMax);
        for (x, y) in a.values().iter().zip(st.values()) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}
