//! Command-line grammar. Lengths take unit suffixes (`--lambda 1um`,
//! `--l 10cm`), angles are given in degrees via `--*-deg` flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use noonlith::{DetectorGrid, GaussianNoonSetup, PumpPhaseMatchProfiles, SlitGeometry};

use crate::error::CliError;
use crate::output::{Format, OutputSink};
use crate::units::{degrees_to_radians, parse_length};

#[derive(Parser, Debug)]
#[command(
    name = "noonlith",
    about = "Two-photon double-slit coincidence maps, crossed-beam N-photon fringes, and exposure-time scaling",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Double-slit patterns, coincidence maps, slit amplitudes and the
    /// propagation oracle
    Pattern(PatternArgs),
    /// Crossed-Gaussian-beam N-photon scans and reports
    Gaussian(GaussianArgs),
    /// Monte Carlo exposure-time scaling with exponent fits
    Expose(ExposeArgs),
    /// Run the cross-validation and invariant suite
    Validate(ValidateArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    /// Peak value 1 (figure reproduction).
    Unitmax,
    /// Total mass 1 (probability semantics).
    Unitsum,
}

impl From<NormArg> for noonlith::Normalization {
    fn from(arg: NormArg) -> Self {
        match arg {
            NormArg::Unitmax => noonlith::Normalization::UnitMax,
            NormArg::Unitsum => noonlith::Normalization::UnitSum,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Photon bunches stay together.
    Boto,
    /// Photons propagate independently.
    Steuernagel,
}

impl From<ModelArg> for noonlith::Model {
    fn from(arg: ModelArg) -> Self {
        match arg {
            ModelArg::Boto => noonlith::Model::Boto,
            ModelArg::Steuernagel => noonlith::Model::Steuernagel,
        }
    }
}

/// Slit/detector geometry shared by the pattern subcommands.
#[derive(Args, Debug, Clone)]
pub struct GeometryOpts {
    /// Number of detectors (odd)
    #[arg(long, default_value_t = 101)]
    pub grid: u32,
    /// Single-photon fringes spanned by the grid (used unless --separation
    /// is given)
    #[arg(long, default_value_t = 4.5)]
    pub fringes: f64,
    /// Detector width b
    #[arg(long, value_parser = parse_length, default_value = "10um")]
    pub detector_width: f64,
    /// Slit separation d; overrides --fringes
    #[arg(long, value_parser = parse_length)]
    pub separation: Option<f64>,
    /// Slit width a (defaults to fringe-spacing/50)
    #[arg(long, value_parser = parse_length)]
    pub slit_width: Option<f64>,
    /// Slit-to-screen distance R
    #[arg(long, value_parser = parse_length, default_value = "1m")]
    pub screen_distance: f64,
    /// Wavelength λ
    #[arg(long, value_parser = parse_length, default_value = "1um")]
    pub lambda: f64,
}

impl GeometryOpts {
    pub fn build(&self) -> Result<(SlitGeometry, DetectorGrid), CliError> {
        let grid = DetectorGrid::with_detectors(self.grid, self.detector_width)?;
        let wavenumber = 2.0 * std::f64::consts::PI / self.lambda;
        let separation = match self.separation {
            Some(d) => d,
            None => {
                let theta = self.fringes * std::f64::consts::PI / grid.detectors() as f64;
                2.0 * self.screen_distance * theta / (wavenumber * grid.detector_width())
            }
        };
        let slit_width = self.slit_width.unwrap_or_else(|| {
            let fringe = self.lambda * self.screen_distance / separation;
            (fringe / 50.0).min(separation / 4.0)
        });
        let geom = SlitGeometry::new(separation, slit_width, self.screen_distance, wavenumber)?;
        Ok((geom, grid))
    }
}

/// Pump and phase-matching profile selection.
#[derive(Args, Debug, Clone)]
pub struct ProfileOpts {
    /// Pump beam waist
    #[arg(long, value_parser = parse_length, default_value = "5mm")]
    pub pump_waist: f64,
    /// Gaussian pair-correlation width; when set, replaces the sinc
    /// phase-matching profile
    #[arg(long, value_parser = parse_length)]
    pub correlation: Option<f64>,
    /// Crystal length for the sinc phase-matching profile
    #[arg(long, value_parser = parse_length, default_value = "5mm")]
    pub crystal_length: f64,
}

impl ProfileOpts {
    pub fn build(&self, wavenumber: f64) -> Result<PumpPhaseMatchProfiles, CliError> {
        Ok(match self.correlation {
            Some(sigma) => {
                PumpPhaseMatchProfiles::gaussian_pump_gaussian_correlation(self.pump_waist, sigma)?
            }
            None => PumpPhaseMatchProfiles::gaussian_pump_sinc_phase_matching(
                self.pump_waist,
                self.crystal_length,
                wavenumber,
            )?,
        })
    }
}

#[derive(Args, Debug, Clone)]
pub struct OutputOpts {
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Output formats
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv,json")]
    pub formats: Vec<Format>,
    /// Normalization of written patterns and maps
    #[arg(long, value_enum, default_value = "unitmax")]
    pub norm: NormArg,
}

impl OutputOpts {
    pub fn sink(&self, command: String) -> OutputSink {
        OutputSink::new(self.out.clone(), self.formats.clone(), command)
    }
}

#[derive(Args, Debug)]
pub struct PatternArgs {
    #[command(subcommand)]
    pub mode: PatternMode,
}

#[derive(Subcommand, Debug)]
pub enum PatternMode {
    /// Single-photon screen pattern cos²(θs)
    Single {
        #[command(flatten)]
        geometry: GeometryOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Same-pixel coincidence map of the sticking model (diagonal only)
    Boto {
        #[command(flatten)]
        geometry: GeometryOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Coincidence map of independently propagating photons
    Steuernagel {
        #[command(flatten)]
        geometry: GeometryOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// One panel of the canonical (α, φ) state gallery
    A1 {
        /// Panel a..f
        #[arg(long)]
        panel: String,
        #[command(flatten)]
        geometry: GeometryOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Coincidence map of an arbitrary (α, φ) slit state
    Detect {
        #[arg(long, default_value_t = 180.0)]
        alpha_deg: f64,
        #[arg(long, default_value_t = 0.0)]
        phi_deg: f64,
        #[command(flatten)]
        geometry: GeometryOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Slit amplitudes c_ij and (α, φ) from pump/phase-matching profiles
    Amplitudes {
        #[command(flatten)]
        geometry: GeometryOpts,
        #[command(flatten)]
        profiles: ProfileOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Brute-force propagation oracle from the source plane
    Oracle {
        #[command(flatten)]
        geometry: GeometryOpts,
        #[command(flatten)]
        profiles: ProfileOpts,
        /// Source-to-slit distance (0m = source at the slits)
        #[arg(long, value_parser = parse_length, default_value = "0m")]
        crystal_to_slit: f64,
        /// Relative L¹ agreement required between refinement levels
        #[arg(long, default_value_t = 5e-3)]
        oracle_tol: f64,
        /// Sample-count doublings to try
        #[arg(long, default_value_t = 2)]
        oracle_refinements: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Args, Debug)]
pub struct GaussianArgs {
    #[command(subcommand)]
    pub mode: GaussianMode,
}

/// Beam/setup parameters shared by the gaussian subcommands.
#[derive(Args, Debug, Clone)]
pub struct SetupOpts {
    /// Minimum beam waist w
    #[arg(long, value_parser = parse_length, default_value = "1mm")]
    pub w: f64,
    /// Waist-to-origin distance L
    #[arg(long, value_parser = parse_length, default_value = "10cm")]
    pub l: f64,
    /// Beam half-angle α in degrees
    #[arg(long, default_value_t = 30.0)]
    pub alpha_deg: f64,
    /// Wavelength λ
    #[arg(long, value_parser = parse_length, default_value = "1um")]
    pub lambda: f64,
    /// Photons per detection event
    #[arg(long = "N", default_value_t = 2)]
    pub photons: u32,
}

impl SetupOpts {
    pub fn build(&self) -> Result<GaussianNoonSetup, CliError> {
        Ok(GaussianNoonSetup::new(
            self.w,
            self.l,
            degrees_to_radians(self.alpha_deg),
            self.lambda,
            self.photons,
        )?)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScanModelArg {
    Noon,
    Delta,
}

impl From<ScanModelArg> for noonlith::ScanModel {
    fn from(arg: ScanModelArg) -> Self {
        match arg {
            ScanModelArg::Noon => noonlith::ScanModel::Noon,
            ScanModelArg::Delta => noonlith::ScanModel::Delta,
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum GaussianMode {
    /// Same-point N-photon probability scan
    Scan {
        #[command(flatten)]
        setup: SetupOpts,
        #[arg(long, value_enum, default_value = "noon")]
        model: ScanModelArg,
        /// Scan half-extent (defaults to 10 fringe spacings)
        #[arg(long, value_parser = parse_length)]
        extent: Option<f64>,
        /// Samples across the scan
        #[arg(long, default_value_t = 4001)]
        points: usize,
        /// Drop the x³ phase term
        #[arg(long)]
        no_cubic: bool,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Two-photon coincidence map P(x₁, x₂)
    Pair {
        #[command(flatten)]
        setup: SetupOpts,
        #[arg(long, value_enum, default_value = "noon")]
        model: ScanModelArg,
        /// Map half-extent (defaults to 5 fringe spacings)
        #[arg(long, value_parser = parse_length)]
        extent: Option<f64>,
        /// Detectors per axis (odd)
        #[arg(long, default_value_t = 61)]
        grid: u32,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Report the linear and cubic phase prefactors at a position
    CheckCubic {
        #[command(flatten)]
        setup: SetupOpts,
        /// Evaluation position
        #[arg(long, value_parser = parse_length, default_value = "0.1mm")]
        x: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Report the fringe-visibility thresholds
    Visibility {
        #[command(flatten)]
        setup: SetupOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
}

#[derive(Args, Debug)]
pub struct ExposeArgs {
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Pixel counts to sweep
    #[arg(long, value_delimiter = ',', required = true)]
    pub pixels: Vec<usize>,
    /// Photons per bunch, swept
    #[arg(long = "N", value_delimiter = ',', default_value = "2")]
    pub photons: Vec<u32>,
    /// Events required on every reachable pixel
    #[arg(long, default_value_t = 1)]
    pub target_events: u32,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fringe-weight the pixels with this single-photon phase step
    /// (radians); uniform weighting when absent
    #[arg(long)]
    pub fringe_theta: Option<f64>,
    /// Node-pixel exclusion threshold (fraction of the peak weight)
    #[arg(long, default_value_t = 1e-3)]
    pub node_threshold: f64,
    /// Per-trial bunch budget
    #[arg(long, default_value_t = 100_000_000)]
    pub max_bunches: u64,
    /// Fit raw means instead of dividing out the coupon-collector factor
    #[arg(long)]
    pub raw_fit: bool,
    #[command(flatten)]
    pub output: OutputOpts,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    /// Run the fast subset only
    #[arg(long)]
    pub quick: bool,
    /// Seed for the stochastic checks
    #[arg(long, default_value_t = 20260809)]
    pub seed: u64,
}
