//! Slit-plane and detector-plane geometry.

use serde::Serialize;

use crate::error::{Error, Result};

/// Double-slit geometry: separation `d`, slit width `a`, distance `R` to the
/// detection plane, and the light's wavenumber `k = 2π/λ`.
///
/// `slit_width` may be zero to denote ideal (delta) slits; the numerical
/// propagation oracle requires it to be positive.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SlitGeometry {
    /// Centre-to-centre slit separation d (m).
    pub separation: f64,
    /// Width a of each slit opening (m); 0 means ideal delta slits.
    pub slit_width: f64,
    /// Distance R from the slit plane to the detection plane (m).
    pub screen_distance: f64,
    /// Wavenumber k = 2π/λ (rad/m).
    pub wavenumber: f64,
}

impl SlitGeometry {
    pub fn new(separation: f64, slit_width: f64, screen_distance: f64, wavenumber: f64) -> Result<Self> {
        crate::error::require_positive(separation, "slit separation")?;
        crate::error::require_positive(screen_distance, "screen distance")?;
        crate::error::require_positive(wavenumber, "wavenumber")?;
        crate::error::require_non_negative(slit_width, "slit width")?;
        if slit_width >= separation {
            return Err(Error::InvalidInput(format!(
                "slit width {slit_width} must be smaller than the separation {separation} (slits must not overlap)"
            )));
        }
        Ok(Self {
            separation,
            slit_width,
            screen_distance,
            wavenumber,
        })
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wavenumber
    }

    /// Single-photon fringe period λR/d at the detection plane.
    pub fn fringe_spacing(&self) -> f64 {
        self.wavelength() * self.screen_distance / self.separation
    }

    /// Diagnostic: true when R < 100·d, where the paraxial small-angle
    /// treatment starts to strain.
    pub fn paraxial_warning(&self) -> bool {
        self.screen_distance < 100.0 * self.separation
    }

    /// Geometry whose single-photon pattern spans exactly `fringes` fringe
    /// periods across `grid` (i.e. θ·(S+1) = fringes·π).
    ///
    /// Wavelength is fixed at 1 µm and R at 1 m; the separation is solved
    /// from the fringe-count identity, and the slit width defaults to
    /// 1/50 of the fringe spacing (narrow enough for the delta-slit
    /// approximation, wide enough for the numerical oracle).
    pub fn for_fringe_count(fringes: f64, grid: &DetectorGrid) -> Result<Self> {
        crate::error::require_positive(fringes, "fringe count")?;
        let wavenumber = 2.0 * std::f64::consts::PI / 1.0e-6;
        let screen_distance = 1.0;
        let theta = fringes * std::f64::consts::PI / grid.detectors() as f64;
        let separation = 2.0 * screen_distance * theta / (wavenumber * grid.detector_width());
        // Fringe-spacing/50, capped so wide-fringe geometries keep a < d.
        let slit_width =
            (1.0e-6 * screen_distance / (50.0 * separation)).min(separation / 4.0);
        Self::new(separation, slit_width, screen_distance, wavenumber)
    }
}

/// A line of S+1 detectors of width `b`, indexed s ∈ {-S/2, …, S/2}; the
/// detector with index s is centred at x = s·b.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DetectorGrid {
    s: u32,
    b: f64,
}

impl DetectorGrid {
    /// `s` must be even (an odd number of detectors, centred on the axis)
    /// and the detector width positive.
    pub fn new(s: u32, detector_width: f64) -> Result<Self> {
        if !s.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "S must be even (odd number of detectors), got {s}"
            )));
        }
        crate::error::require_positive(detector_width, "detector width")?;
        Ok(Self {
            s,
            b: detector_width,
        })
    }

    /// Grid with `detectors` detectors (odd count) of width `b`.
    pub fn with_detectors(detectors: u32, detector_width: f64) -> Result<Self> {
        if detectors == 0 || detectors.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "detector count must be odd and positive, got {detectors}"
            )));
        }
        Self::new(detectors - 1, detector_width)
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn detector_width(&self) -> f64 {
        self.b
    }

    pub fn detectors(&self) -> usize {
        self.s as usize + 1
    }

    pub fn index_min(&self) -> i64 {
        -(i64::from(self.s) / 2)
    }

    pub fn index_max(&self) -> i64 {
        i64::from(self.s) / 2
    }

    /// Detector indices -S/2 ..= S/2 in order.
    pub fn indices(&self) -> impl Iterator<Item = i64> + '_ {
        self.index_min()..=self.index_max()
    }

    /// Centre position of detector s.
    pub fn position(&self, index: i64) -> f64 {
        index as f64 * self.b
    }
}
