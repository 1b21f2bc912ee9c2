//! N-photon interference of two crossed Gaussian beams carrying a NOON
//! state, and the delta-correlated counterfactual in which the photons are
//! all born at one point.
//!
//! Two crossed beams meet the detection axis at half-angle `beam_angle`;
//! their waists sit a distance `waist_distance` from the origin. All
//! probabilities are normalised to 1 at the origin (the absolute
//! normalisation of the delta-seeded state does not exist in the
//! continuum), and the transverse coordinate is restricted to the beam
//! crossing plane (y = 0).
//!
//! Note the symbol clash with the slit modules: here `alpha`/`beam_angle`
//! is the beam half-angle, not the slit-state mixing angle.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Which of the two competing source models a scan uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanModel {
    /// N independent photons in a NOON superposition of the two beams.
    Noon,
    /// All N photons delta-correlated at a common birth position.
    Delta,
}

/// Crossed-Gaussian-beam setup for N-photon detection.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GaussianNoonSetup {
    /// Minimum beam waist radius w (m).
    pub waist: f64,
    /// Distance L from each waist to the origin (m).
    pub waist_distance: f64,
    /// Beam half-angle α to the z-axis (rad), 0 < α < π/2.
    pub beam_angle: f64,
    /// Wavelength λ (m).
    pub wavelength: f64,
    /// Photon number N ≥ 1.
    pub photons: u32,
}

impl GaussianNoonSetup {
    pub fn new(
        waist: f64,
        waist_distance: f64,
        beam_angle: f64,
        wavelength: f64,
        photons: u32,
    ) -> Result<Self> {
        crate::error::require_positive(waist, "beam waist")?;
        crate::error::require_positive(waist_distance, "waist distance")?;
        crate::error::require_positive(wavelength, "wavelength")?;
        if !beam_angle.is_finite()
            || beam_angle <= 0.0
            || beam_angle >= std::f64::consts::FRAC_PI_2
        {
            return Err(Error::InvalidInput(format!(
                "beam half-angle must lie in (0, π/2), got {beam_angle}"
            )));
        }
        if photons == 0 {
            return Err(Error::InvalidInput("photon number must be at least 1".into()));
        }
        Ok(Self {
            waist,
            waist_distance,
            beam_angle,
            wavelength,
            photons,
        })
    }

    /// Dimensionless diffraction parameter β = λ²L²/(π²w⁴).
    pub fn beta(&self) -> f64 {
        let zr = self.rayleigh_range();
        (self.waist_distance / zr).powi(2)
    }

    /// Rayleigh range πw²/λ.
    pub fn rayleigh_range(&self) -> f64 {
        std::f64::consts::PI * self.waist * self.waist / self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavelength
    }

    /// Complex beam parameter at the waist: 1/q = −iλ/(πw²), i.e. the
    /// phase radius of curvature is infinite there.
    pub fn q_parameter(&self) -> Complex64 {
        Complex64::new(0.0, self.rayleigh_range())
    }

    /// The small-offset expansion behind these formulas assumes
    /// L ≫ x·sin α; flag positions beyond a tenth of that.
    pub fn within_validity(&self, x: f64) -> bool {
        (x * self.beam_angle.sin()).abs() <= self.waist_distance / 10.0
    }

    /// Coefficient of x² in the exponential envelope for the given model.
    pub fn envelope_coefficient(&self, model: ScanModel) -> f64 {
        let k = self.wavenumber();
        let beta = self.beta();
        let cos2 = self.beam_angle.cos().powi(2);
        let n = self.photons as f64;
        match model {
            ScanModel::Noon => {
                k * cos2 * beta.sqrt() * n / (self.waist_distance * (1.0 + 1.0 / beta))
            }
            ScanModel::Delta => {
                k * n * n * beta.sqrt() * cos2 / (self.waist_distance * (beta + n * n))
            }
        }
    }

    /// Coefficient of x in the cosine argument: k·sinα·N.
    pub fn linear_phase_coefficient(&self) -> f64 {
        self.wavenumber() * self.beam_angle.sin() * self.photons as f64
    }

    /// Coefficient of x³ in the cosine argument:
    /// k·cos²α·sinα·N / (2L²(1+β⁻¹)).
    pub fn cubic_phase_coefficient(&self) -> f64 {
        let k = self.wavenumber();
        let beta = self.beta();
        let l = self.waist_distance;
        k * self.beam_angle.cos().powi(2) * self.beam_angle.sin() * self.photons as f64
            / (2.0 * l * l * (1.0 + 1.0 / beta))
    }
}

/// N-fold same-point detection probability of the NOON state, normalised
/// to 1 at x = 0:
/// P(x) = exp(−a·x²)·cos²(k·sinα·N·x − c₃·x³), with the envelope and phase
/// coefficients of [`GaussianNoonSetup`]. `include_cubic` keeps or drops
/// the x³ phase term.
pub fn noon_same_point_probability(setup: &GaussianNoonSetup, x: f64, include_cubic: bool) -> f64 {
    let envelope = (-setup.envelope_coefficient(ScanModel::Noon) * x * x).exp();
    let mut phase = setup.linear_phase_coefficient() * x;
    if include_cubic {
        phase -= setup.cubic_phase_coefficient() * x * x * x;
    }
    envelope * phase.cos().powi(2)
}

/// Two-photon coincidence P(x₁, x₂) for the NOON state (pair form; the
/// setup's photon number is not consulted):
/// P ∝ exp(−a₁(x₁²+x₂²))·cos²(k·sinα·(x₁+x₂)) with a₁ the per-coordinate
/// (N = 1) envelope coefficient. Fringes run along anti-diagonals.
pub fn noon_pair_coincidence(setup: &GaussianNoonSetup, x1: f64, x2: f64) -> f64 {
    let per_coord = GaussianNoonSetup {
        photons: 1,
        ..*setup
    }
    .envelope_coefficient(ScanModel::Noon);
    let envelope = (-per_coord * (x1 * x1 + x2 * x2)).exp();
    let phase = setup.wavenumber() * setup.beam_angle.sin() * (x1 + x2);
    envelope * phase.cos().powi(2)
}

/// N-fold same-point detection probability for the delta-correlated state,
/// normalised to 1 at x = 0:
/// P(x) = exp(−k·N²·√β·x²·cos²α/(L(β+N²)))·cos²(k·sinα·N·x).
pub fn delta_state_probability(setup: &GaussianNoonSetup, x: f64) -> f64 {
    let envelope = (-setup.envelope_coefficient(ScanModel::Delta) * x * x).exp();
    let phase = setup.linear_phase_coefficient() * x;
    envelope * phase.cos().powi(2)
}

/// Pair coincidence for the delta-correlated state:
/// P ∝ exp(−k·cos²α·√β·(x₁+x₂)²/(L(β+4)))·cos²(k·sinα·(x₁+x₂)).
/// Depends on the coordinates only through x₁+x₂, so it does not decay
/// along anti-diagonals.
pub fn delta_pair_coincidence(setup: &GaussianNoonSetup, x1: f64, x2: f64) -> f64 {
    let k = setup.wavenumber();
    let beta = setup.beta();
    let cos2 = setup.beam_angle.cos().powi(2);
    let s = x1 + x2;
    let envelope = (-k * cos2 * beta.sqrt() * s * s / (setup.waist_distance * (beta + 4.0))).exp();
    let phase = k * setup.beam_angle.sin() * s;
    envelope * phase.cos().powi(2)
}

/// A sampled probability scan with its bare Gaussian envelope.
#[derive(Debug, Clone, Serialize)]
pub struct FringeScan {
    positions: Vec<f64>,
    values: Vec<f64>,
    envelope: Vec<f64>,
}

impl FringeScan {
    fn new(positions: Vec<f64>, values: Vec<f64>, envelope: Vec<f64>) -> Result<Self> {
        if positions.len() != values.len() || values.len() != envelope.len() {
            return Err(Error::InvalidInput("scan arrays must share a length".into()));
        }
        if values
            .iter()
            .zip(&envelope)
            .any(|(v, e)| *v > *e + 1e-12 || *v < 0.0)
        {
            return Err(Error::InvalidInput(
                "scan values must stay within their envelope".into(),
            ));
        }
        Ok(Self {
            positions,
            values,
            envelope,
        })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn envelope(&self) -> &[f64] {
        &self.envelope
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Sample a same-point probability scan on [x_min, x_max].
pub fn scan(
    setup: &GaussianNoonSetup,
    model: ScanModel,
    x_min: f64,
    x_max: f64,
    points: usize,
    include_cubic: bool,
) -> Result<FringeScan> {
    if points < 2 {
        return Err(Error::InvalidInput("a scan needs at least 2 points".into()));
    }
    if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
        return Err(Error::InvalidInput(format!(
            "empty scan range [{x_min}, {x_max}]"
        )));
    }
    let a = setup.envelope_coefficient(model);
    let step = (x_max - x_min) / (points - 1) as f64;
    let mut positions = Vec::with_capacity(points);
    let mut values = Vec::with_capacity(points);
    let mut envelope = Vec::with_capacity(points);
    for i in 0..points {
        let x = x_min + step * i as f64;
        positions.push(x);
        envelope.push((-a * x * x).exp());
        values.push(match model {
            ScanModel::Noon => noon_same_point_probability(setup, x, include_cubic),
            ScanModel::Delta => delta_state_probability(setup, x),
        });
    }
    FringeScan::new(positions, values, envelope)
}

/// Median gap between adjacent maxima of the sampled values.
///
/// Maxima are located by the sign change of the centred finite difference
/// and refined with a three-point parabolic fit, which keeps the estimate
/// well below the grid quantisation error. The scan should resolve each
/// fringe with at least ~200 points.
pub fn measure_peak_spacing(scan: &FringeScan) -> Result<f64> {
    let v = scan.values();
    let x = scan.positions();
    let mut peaks = Vec::new();
    for i in 1..v.len().saturating_sub(1) {
        let before = v[i] - v[i - 1];
        let after = v[i + 1] - v[i];
        if before > 0.0 && after <= 0.0 {
            // Parabolic vertex through (i-1, i, i+1).
            let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let shift = if denom.abs() > 0.0 {
                0.5 * (v[i - 1] - v[i + 1]) / denom
            } else {
                0.0
            };
            let h = x[i + 1] - x[i];
            peaks.push(x[i] + shift.clamp(-0.5, 0.5) * h);
        }
    }
    if peaks.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "found {} maxima; need at least 2 to measure a spacing",
            peaks.len()
        )));
    }
    let mut gaps: Vec<f64> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.sort_by(f64::total_cmp);
    Ok(gaps[gaps.len() / 2])
}

/// Position where the envelope first falls below 1/e² of its origin value,
/// by linear interpolation between samples.
pub fn measure_envelope_half_width(scan: &FringeScan) -> Result<f64> {
    let target = (-2.0f64).exp();
    let e = scan.envelope();
    let x = scan.positions();
    for i in 1..e.len() {
        if e[i] <= target {
            let f = (e[i - 1] - target) / (e[i - 1] - e[i]);
            return Ok(x[i - 1] + f * (x[i] - x[i - 1]));
        }
    }
    Err(Error::InsufficientData(
        "envelope never falls below 1/e² inside the scan range".into(),
    ))
}

/// The positions between which the cosine oscillation is slower than the
/// envelope decay, i.e. no fringes are visible: fringes show for
/// x < x_low (linear phase dominates) or x > x_high (cubic phase dominates).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VisibilityConditions {
    pub x_low: f64,
    pub x_high: f64,
    /// True when the two windows overlap (x_low ≥ x_high), so one of the
    /// two conditions holds at every position.
    pub always_satisfied: bool,
}

impl VisibilityConditions {
    pub fn is_satisfied(&self, x: f64) -> bool {
        self.always_satisfied || x.abs() < self.x_low || x.abs() > self.x_high
    }
}

/// Fringe-visibility thresholds:
/// x_low = (1+β⁻¹)·sinα/cos²α·πw²/λ and x_high = 2πw²/(λ·sinα).
/// For α > π/4 the windows overlap for every β ≤ 1 and, more generally,
/// whenever tan²α ≥ 2β/(β+1).
pub fn visibility_conditions(setup: &GaussianNoonSetup) -> VisibilityConditions {
    let beta = setup.beta();
    let sin = setup.beam_angle.sin();
    let cos2 = setup.beam_angle.cos().powi(2);
    let zr = setup.rayleigh_range();
    let x_low = (1.0 + 1.0 / beta) * sin / cos2 * zr;
    let x_high = 2.0 * zr / sin;
    VisibilityConditions {
        x_low,
        x_high,
        always_satisfied: x_low >= x_high,
    }
}

/// The two prefactors of the cosine argument written in units of x/λ:
/// 2π·sinα·N for the linear term and
/// 2π·cos²α·sinα·N / (2(1+β⁻¹)(L/λ)²) for the cubic term.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CubicTermReport {
    /// Prefactor of (x/λ).
    pub linear_coeff: f64,
    /// Prefactor of (x/λ)³.
    pub cubic_coeff: f64,
    /// Magnitude ratio of the linear to the cubic *term* at the given x
    /// (infinite at x = 0; grows as x shrinks).
    pub term_ratio: f64,
}

impl CubicTermReport {
    /// x-independent ratio of the two prefactors.
    pub fn prefactor_ratio(&self) -> f64 {
        self.linear_coeff / self.cubic_coeff
    }
}

/// Sizes of the linear and cubic phase terms at position x.
pub fn cubic_term_magnitude(setup: &GaussianNoonSetup, x: f64) -> CubicTermReport {
    let beta = setup.beta();
    let sin = setup.beam_angle.sin();
    let cos2 = setup.beam_angle.cos().powi(2);
    let n = setup.photons as f64;
    let l_over_lambda = setup.waist_distance / setup.wavelength;
    let two_pi = 2.0 * std::f64::consts::PI;
    let linear = two_pi * sin * n;
    let cubic = two_pi * cos2 * sin * n / (2.0 * (1.0 + 1.0 / beta) * l_over_lambda * l_over_lambda);
    let x_over_lambda = x / setup.wavelength;
    let term_ratio = if x == 0.0 {
        f64::INFINITY
    } else {
        (linear * x_over_lambda).abs() / (cubic * x_over_lambda.powi(3)).abs()
    };
    CubicTermReport {
        linear_coeff: linear,
        cubic_coeff: cubic,
        term_ratio,
    }
}
