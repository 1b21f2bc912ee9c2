//! Closed-form single-photon and two-photon detection patterns on the
//! detector grid, for both competing coincidence models, plus the analytic
//! exposure-time scaling law.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DetectorGrid, SlitGeometry};
use crate::quadrature::pairwise_sum;

/// Tolerance for the exchange-symmetry and normalization invariants.
pub const MAP_TOL: f64 = 1e-12;

/// How pattern values are scaled.
///
/// `UnitMax` (peak = 1) reproduces figures; `UnitSum` (total = 1) gives the
/// values probability semantics. The underlying physics only defines the
/// patterns up to proportionality, and closed-form normalisation constants
/// would hold only when the grid spans an integer number of fringes;
/// renormalising the sampled values avoids putting that constraint on the
/// caller's parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    UnitMax,
    UnitSum,
}

/// Which theoretical coincidence model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Photon bunches stay together: all N photons land on one detector.
    Boto,
    /// Photons diffract independently after the slits.
    Steuernagel,
}

/// A non-negative pattern sampled on the detector grid.
#[derive(Debug, Clone, Serialize)]
pub struct Pattern1D {
    values: Vec<f64>,
    normalization: Normalization,
}

impl Pattern1D {
    fn new(mut values: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput(
                "pattern values must be finite and non-negative".into(),
            ));
        }
        normalize(&mut values, normalization)?;
        Ok(Self {
            values,
            normalization,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }
}

/// Joint detection probabilities P(s, t) on an (S+1)×(S+1) grid.
///
/// Construction enforces photon-exchange symmetry |P(s,t) − P(t,s)| within
/// `MAP_TOL` of the peak and the declared normalization.
#[derive(Debug, Clone, Serialize)]
pub struct CoincidenceMap {
    detectors: usize,
    values: Vec<f64>,
    normalization: Normalization,
}

impl CoincidenceMap {
    /// Build from raw values, checking symmetry and normalizing.
    ///
    /// `f` is evaluated at detector index pairs (s, t).
    pub fn from_fn<F>(grid: &DetectorGrid, normalization: Normalization, f: F) -> Result<Self>
    where
        F: Fn(i64, i64) -> f64,
    {
        let n = grid.detectors();
        let mut values = vec![0.0; n * n];
        for (i, s) in grid.indices().enumerate() {
            for (j, t) in grid.indices().enumerate() {
                values[i * n + j] = f(s, t);
            }
        }
        Self::from_values(n, values, normalization)
    }

    pub fn from_values(
        detectors: usize,
        mut values: Vec<f64>,
        normalization: Normalization,
    ) -> Result<Self> {
        if values.len() != detectors * detectors {
            return Err(Error::InvalidInput(format!(
                "expected {} values for a {detectors}x{detectors} map, got {}",
                detectors * detectors,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInput(
                "coincidence values must be finite and non-negative".into(),
            ));
        }
        let peak = values.iter().cloned().fold(0.0f64, f64::max);
        for i in 0..detectors {
            for j in (i + 1)..detectors {
                let a = values[i * detectors + j];
                let b = values[j * detectors + i];
                if (a - b).abs() > MAP_TOL * peak.max(1.0) {
                    return Err(Error::AsymmetricState(format!(
                        "P(s,t) != P(t,s) at indices ({i},{j}): {a} vs {b}"
                    )));
                }
            }
        }
        normalize(&mut values, normalization)?;
        Ok(Self {
            detectors,
            values,
            normalization,
        })
    }

    pub fn detectors(&self) -> usize {
        self.detectors
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// Row-major values; entry (i, j) corresponds to detector indices
    /// s = i − S/2, t = j − S/2.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.detectors + j]
    }

    /// The s = t slice.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.detectors).map(|i| self.get(i, i)).collect()
    }

    /// Fraction of total mass lying off the diagonal.
    pub fn off_diagonal_fraction(&self) -> f64 {
        let total = pairwise_sum(&self.values);
        if total == 0.0 {
            return 0.0;
        }
        let diag = pairwise_sum(&self.diagonal());
        (total - diag) / total
    }
}

fn normalize(values: &mut [f64], normalization: Normalization) -> Result<()> {
    let scale = match normalization {
        Normalization::UnitMax => values.iter().cloned().fold(0.0f64, f64::max),
        Normalization::UnitSum => pairwise_sum(values),
    };
    if !(scale > 0.0) {
        return Err(Error::InvalidInput(
            "cannot normalize an all-zero pattern".into(),
        ));
    }
    for v in values.iter_mut() {
        *v /= scale;
    }
    Ok(())
}

/// Phase accumulated per detector index in the single-photon cosine:
/// θ = k·d·b/(2R).
pub fn phase_step(geom: &SlitGeometry, grid: &DetectorGrid) -> f64 {
    geom.wavenumber * geom.separation * grid.detector_width() / (2.0 * geom.screen_distance)
}

/// Single-photon screen pattern, P(s) ∝ cos²(θ·s).
///
/// The slit-shape envelope is deliberately omitted; every detector sees the
/// same amplitude apart from the interference factor.
pub fn single_photon_pattern(
    geom: &SlitGeometry,
    grid: &DetectorGrid,
    normalization: Normalization,
) -> Pattern1D {
    let theta = phase_step(geom, grid);
    let values = grid
        .indices()
        .map(|s| (theta * s as f64).cos().powi(2))
        .collect();
    Pattern1D::new(values, normalization).expect("cos^2 pattern peaks at s = 0")
}

/// Coincidence map when the pair sticks together:
/// P(s,t) ∝ cos²(2θ·s)·δ_st. Strictly zero off the diagonal; the diagonal
/// fringe period is half the single-photon period.
pub fn boto_coincidence(
    geom: &SlitGeometry,
    grid: &DetectorGrid,
    normalization: Normalization,
) -> CoincidenceMap {
    let theta = phase_step(geom, grid);
    CoincidenceMap::from_fn(grid, normalization, |s, t| {
        if s == t {
            (2.0 * theta * s as f64).cos().powi(2)
        } else {
            0.0
        }
    })
    .expect("diagonal cos^2 map is symmetric and peaks at the origin")
}

/// Coincidence map when the photons propagate independently:
/// P(s,t) ∝ cos²(θ·(s+t)). Fringes run along anti-diagonals, and the s = t
/// slice coincides with the sticking-model diagonal.
pub fn steuernagel_coincidence(
    geom: &SlitGeometry,
    grid: &DetectorGrid,
    normalization: Normalization,
) -> CoincidenceMap {
    let theta = phase_step(geom, grid);
    CoincidenceMap::from_fn(grid, normalization, |s, t| {
        (theta * (s + t) as f64).cos().powi(2)
    })
    .expect("cos^2(s+t) map is symmetric and peaks at the origin")
}

/// Relative exposure-time factor to accumulate a fixed per-detector event
/// count on an S-pixel array with N-photon bunches: S for the sticking
/// model (independent of N), S^N for independent propagation.
pub fn exposure_scaling_law(model: Model, pixels: u64, photons: u32) -> Result<f64> {
    if pixels == 0 {
        return Err(Error::InvalidInput("pixel count must be at least 1".into()));
    }
    if photons == 0 {
        return Err(Error::InvalidInput(
            "photon number must be at least 1".into(),
        ));
    }
    let s = pixels as f64;
    Ok(match model {
        Model::Boto => s,
        Model::Steuernagel => s.powi(photons as i32),
    })
}

/// Count local maxima: a point strictly greater than both neighbours, with
/// plateaus (neighbours equal within 1e-12) counted once at their leftmost
/// point. Endpoints never count.
pub fn count_maxima(values: &[f64]) -> usize {
    const EQ_TOL: f64 = 1e-12;
    let n = values.len();
    let mut count = 0;
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && (values[j + 1] - values[i]).abs() <= EQ_TOL {
            j += 1;
        }
        let rises_left = i > 0 && values[i] > values[i - 1] + EQ_TOL;
        let falls_right = j + 1 < n && values[j] > values[j + 1] + EQ_TOL;
        if rises_left && falls_right {
            count += 1;
        }
        i = j + 1;
    }
    count
}
