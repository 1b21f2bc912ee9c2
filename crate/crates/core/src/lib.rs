//! Interference and coincidence simulations for N-photon states at a
//! double slit and in crossed Gaussian beams, under the two competing
//! models of whether the photons stay spatially correlated after the
//! aperture — together with Monte Carlo measurements of how the exposure
//! time scales with pixel count and photon number under each model.
//!
//! Modules map onto the problem's layers:
//!
//! - [`geometry`]: slit and detector-grid descriptions;
//! - [`pattern`]: closed-form screen patterns and the analytic
//!   exposure-scaling law;
//! - [`biphoton`]: the slit-state algebra, the closed-form two-photon
//!   detection amplitude, and the numerical propagation oracle that
//!   cross-validates it;
//! - [`gaussian`]: N-photon fringe scans of the crossed-Gaussian-beam
//!   arrangement and its delta-correlated counterfactual;
//! - [`exposure`]: seeded Monte Carlo exposure trials, the exact
//!   small-instance completion-time chain, and log-log exponent fits.
//!
//! Everything is a pure function of immutable inputs; the heavy loops
//! parallelise internally with deterministic, thread-count-independent
//! results.

pub mod biphoton;
pub mod error;
pub mod exposure;
pub mod gaussian;
pub mod geometry;
pub mod pattern;
pub mod quadrature;

pub use biphoton::{
    detection_amplitude, fresnel_propagator, panel_map, propagate_numeric, relative_l1,
    slit_amplitudes, BiphotonSlitState, DetectionAmplitude, MomentumSupport, OracleConfig, Panel,
    PumpPhaseMatchProfiles,
};
pub use error::{Error, Result};
pub use exposure::{
    completion_inflation, fit_scaling, simulate_exposure, ExposureConfig, ExposureResult,
    ScalingFit, Weighting,
};
pub use gaussian::{
    cubic_term_magnitude, delta_pair_coincidence, delta_state_probability,
    noon_pair_coincidence, noon_same_point_probability, visibility_conditions, CubicTermReport,
    FringeScan, GaussianNoonSetup, ScanModel, VisibilityConditions,
};
pub use geometry::{DetectorGrid, SlitGeometry};
pub use pattern::{
    boto_coincidence, count_maxima, exposure_scaling_law, phase_step, single_photon_pattern,
    steuernagel_coincidence, CoincidenceMap, Model, Normalization, Pattern1D,
};
