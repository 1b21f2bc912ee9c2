//! Monte Carlo measurement of exposure-time scaling: how many N-photon
//! bunches an S-pixel array needs before every (reachable) pixel has
//! registered a target number of N-fold same-pixel events, under the two
//! coincidence models, plus the log-log exponent fits.

pub mod markov;

use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pattern::Model;
use crate::quadrature::integrate_adaptive_real;

/// Per-pixel weighting of photon arrivals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Every pixel equally likely.
    Uniform,
    /// Interference-fringe weighting with single-photon phase step θ:
    /// the bunch-pixel law is cos²(2θs) for the sticking model and the
    /// per-photon marginal is cos²(θs) for independent propagation.
    Fringe { theta: f64 },
}

/// Configuration of one exposure simulation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExposureConfig {
    /// Number of detector pixels (S ≥ 1).
    pub pixels: usize,
    /// Photons per bunch (N ≥ 2).
    pub photons: u32,
    /// Events every reachable pixel must accumulate (M ≥ 1).
    pub target_events: u32,
    pub model: Model,
    pub weighting: Weighting,
    pub seed: u64,
    /// Independent trial repetitions (≥ 1).
    pub trials: usize,
    /// Pixels whose sampling weight falls below `node_threshold` times the
    /// maximum weight are excluded from the completion requirement: fringe
    /// nodes would otherwise never complete.
    pub node_threshold: f64,
    /// Abort budget per trial.
    pub max_bunches: u64,
}

impl ExposureConfig {
    pub fn new(pixels: usize, photons: u32, model: Model) -> Self {
        Self {
            pixels,
            photons,
            target_events: 1,
            model,
            weighting: Weighting::Uniform,
            seed: 0,
            trials: 100,
            node_threshold: 1e-3,
            max_bunches: 100_000_000,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.pixels == 0 {
            return Err(Error::InvalidInput("pixel count must be at least 1".into()));
        }
        if self.photons < 2 {
            return Err(Error::InvalidInput(
                "bunches need at least 2 photons".into(),
            ));
        }
        if self.target_events == 0 {
            return Err(Error::InvalidInput(
                "target event count must be at least 1".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidInput("need at least one trial".into()));
        }
        if !(0.0..1.0).contains(&self.node_threshold) {
            return Err(Error::InvalidInput(format!(
                "node threshold must lie in [0, 1), got {}",
                self.node_threshold
            )));
        }
        if let Weighting::Fringe { theta } = self.weighting {
            if !theta.is_finite() {
                return Err(Error::InvalidInput("fringe phase step must be finite".into()));
            }
        }
        Ok(())
    }

    /// The per-pixel law bunches are drawn from: the bunch-pixel
    /// distribution for the sticking model, the single-photon marginal for
    /// independent propagation. Normalised to sum 1.
    pub fn sampling_law(&self) -> Vec<f64> {
        let centre = (self.pixels as f64 - 1.0) / 2.0;
        let raw: Vec<f64> = (0..self.pixels)
            .map(|i| {
                let s = i as f64 - centre;
                match self.weighting {
                    Weighting::Uniform => 1.0,
                    Weighting::Fringe { theta } => match self.model {
                        Model::Boto => (2.0 * theta * s).cos().powi(2),
                        Model::Steuernagel => (theta * s).cos().powi(2),
                    },
                }
            })
            .collect();
        let total: f64 = raw.iter().sum();
        raw.into_iter().map(|w| w / total).collect()
    }

    /// Probability that one bunch produces an event at each pixel.
    pub fn event_probabilities(&self) -> Vec<f64> {
        let law = self.sampling_law();
        match self.model {
            Model::Boto => law,
            Model::Steuernagel => law
                .into_iter()
                .map(|m| m.powi(self.photons as i32))
                .collect(),
        }
    }

    /// Indices of pixels that take part in the completion requirement.
    pub fn required_pixels(&self) -> Vec<usize> {
        let law = self.sampling_law();
        let peak = law.iter().cloned().fold(0.0f64, f64::max);
        (0..self.pixels)
            .filter(|&i| law[i] >= self.node_threshold * peak)
            .collect()
    }
}

/// Outcome of a batch of exposure trials.
#[derive(Debug, Clone, Serialize)]
pub struct ExposureResult {
    pub config: ExposureConfig,
    /// Mean bunch count to completion across trials.
    pub mean_bunches: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    /// Bunch count of each trial, in trial order.
    pub per_trial: Vec<u64>,
    /// Events accumulated per pixel, summed over all trials.
    pub event_counts: Vec<u64>,
    /// Pixels that had to complete.
    pub required_pixels: Vec<usize>,
}

/// Run the exposure simulation.
///
/// Per bunch, the sticking model lands all N photons on one pixel drawn
/// from the sampling law; the independent model draws N pixels i.i.d. from
/// the marginal and records an event only when they all coincide. A trial
/// ends when every required pixel holds `target_events` events.
///
/// Trials use substream `trial + 1` of a ChaCha8 keyed by the seed, so the
/// result is bit-identical for a given config regardless of thread count,
/// and early trials do not change when more trials are requested.
pub fn simulate_exposure(cfg: &ExposureConfig) -> Result<ExposureResult> {
    cfg.validate()?;
    let law = cfg.sampling_law();
    let required = cfg.required_pixels();
    if required.is_empty() {
        return Err(Error::InvalidInput(
            "no pixel clears the node threshold".into(),
        ));
    }
    let dist = WeightedIndex::new(&law)
        .map_err(|e| Error::InvalidInput(format!("invalid sampling law: {e}")))?;

    let outcomes: Vec<Result<(u64, Vec<u64>)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, &dist, &required, trial))
        .collect();
    let mut per_trial = Vec::with_capacity(cfg.trials);
    let mut event_counts = vec![0u64; cfg.pixels];
    for outcome in outcomes {
        let (bunches, counts) = outcome?;
        per_trial.push(bunches);
        for (total, c) in event_counts.iter_mut().zip(counts) {
            *total += c;
        }
    }
    let n = per_trial.len() as f64;
    let mean = per_trial.iter().map(|&b| b as f64).sum::<f64>() / n;
    let var = per_trial
        .iter()
        .map(|&b| (b as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    Ok(ExposureResult {
        config: *cfg,
        mean_bunches: mean,
        std_error: (var / n).sqrt(),
        per_trial,
        event_counts,
        required_pixels: required,
    })
}

fn run_trial(
    cfg: &ExposureConfig,
    dist: &WeightedIndex<f64>,
    required: &[usize],
    trial: usize,
) -> Result<(u64, Vec<u64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64 + 1);
    let target = u64::from(cfg.target_events);
    let mut counts = vec![0u64; cfg.pixels];
    let mut is_required = vec![false; cfg.pixels];
    for &i in required {
        is_required[i] = true;
    }
    let mut remaining = required.len();
    let mut bunches: u64 = 0;
    while remaining > 0 {
        if bunches >= cfg.max_bunches {
            return Err(Error::TrialBudgetExceeded {
                trial,
                budget: cfg.max_bunches,
            });
        }
        bunches += 1;
        let event = match cfg.model {
            Model::Boto => Some(dist.sample(&mut rng)),
            Model::Steuernagel => {
                let first = dist.sample(&mut rng);
                let mut all_same = true;
                for _ in 1..cfg.photons {
                    if dist.sample(&mut rng) != first {
                        all_same = false;
                        break;
                    }
                }
                all_same.then_some(first)
            }
        };
        if let Some(pixel) = event {
            counts[pixel] += 1;
            if counts[pixel] == target && is_required[pixel] {
                remaining -= 1;
            }
        }
    }
    Ok((bunches, counts))
}

/// A fitted power law y ∝ x^exponent from a log-log regression.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// A fitted exponential law y ∝ base^x from a semi-log regression.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentialFit {
    pub base: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Fitted scaling exponents of a sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingFit {
    /// Slope of log(mean) vs log(pixels) at fixed photon number; expect N
    /// for independent propagation and 1 for the sticking model.
    pub exponent_s: Option<PowerLawFit>,
    /// Base of the per-photon growth at fixed pixel count; expect S for
    /// independent propagation and 1 for the sticking model.
    pub exponent_n_base: Option<ExponentialFit>,
}

/// Expected completion time divided by S^N (the coupon-collector
/// inflation): H_S for a single event per pixel; for M > 1 the Poissonised
/// integral ∫ 1−P(M,t)^S dt with P the regularised lower incomplete gamma.
pub fn completion_inflation(required_pixels: usize, target_events: u32) -> Result<f64> {
    if required_pixels == 0 {
        return Err(Error::InvalidInput("no required pixels".into()));
    }
    let s = required_pixels as f64;
    if target_events == 1 {
        return Ok((1..=required_pixels).map(|k| 1.0 / k as f64).sum());
    }
    let m = target_events as usize;
    let upper = s.ln() + 5.0 * m as f64 + 40.0;
    let integrand = move |t: f64| {
        // P(Gamma(M) <= t) via the Poisson tail sum.
        let mut term = (-t).exp();
        let mut tail = term;
        for j in 1..m {
            term *= t / j as f64;
            tail += term;
        }
        let cdf = 1.0 - tail;
        if cdf <= 0.0 {
            1.0
        } else {
            1.0 - cdf.powf(s)
        }
    };
    integrate_adaptive_real(integrand, 0.0, upper, 1e-10, 40)
}

/// Least-squares exponent fits over a sweep of exposure results.
///
/// `correct_coupon` divides each mean by the analytic coupon-collector
/// inflation before fitting, exposing the model's S^N (or S) law; the raw
/// fit otherwise carries the slowly varying H_S factor of the
/// every-pixel completion criterion.
///
/// The S-exponent is fitted over the photon number with the most distinct
/// pixel counts (≥ 3 required), and the N-base over the pixel count with
/// the most distinct photon numbers (≥ 3 required). At least one of the
/// two fits must be possible.
pub fn fit_scaling(results: &[ExposureResult], correct_coupon: bool) -> Result<ScalingFit> {
    if results.is_empty() {
        return Err(Error::InsufficientData("no results to fit".into()));
    }
    let value = |r: &ExposureResult| -> Result<f64> {
        let mean = if correct_coupon {
            r.mean_bunches
                / completion_inflation(r.required_pixels.len(), r.config.target_events)?
        } else {
            r.mean_bunches
        };
        Ok(mean.ln())
    };

    // S sweep at the photon number with the most distinct pixel counts.
    let mut exponent_s = None;
    let photon_values: Vec<u32> = distinct(results.iter().map(|r| r.config.photons));
    let mut best: Option<(usize, u32)> = None;
    for &n in &photon_values {
        let pixels = distinct(
            results
                .iter()
                .filter(|r| r.config.photons == n)
                .map(|r| r.config.pixels),
        );
        if pixels.len() >= 3 && best.is_none_or(|(count, _)| pixels.len() > count) {
            best = Some((pixels.len(), n));
        }
    }
    if let Some((_, n)) = best {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for r in results.iter().filter(|r| r.config.photons == n) {
            xs.push((r.config.pixels as f64).ln());
            ys.push(value(r)?);
        }
        let (slope, r2) = linear_fit(&xs, &ys)?;
        exponent_s = Some(PowerLawFit {
            exponent: slope,
            r_squared: r2,
            points: xs.len(),
        });
    }

    // N sweep at the pixel count with the most distinct photon numbers.
    let mut exponent_n_base = None;
    let pixel_values: Vec<usize> = distinct(results.iter().map(|r| r.config.pixels));
    let mut best: Option<(usize, usize)> = None;
    for &s in &pixel_values {
        let ns = distinct(
            results
                .iter()
                .filter(|r| r.config.pixels == s)
                .map(|r| r.config.photons),
        );
        if ns.len() >= 3 && best.is_none_or(|(count, _)| ns.len() > count) {
            best = Some((ns.len(), s));
        }
    }
    if let Some((_, s)) = best {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for r in results.iter().filter(|r| r.config.pixels == s) {
            xs.push(f64::from(r.config.photons));
            ys.push(value(r)?);
        }
        let (slope, r2) = linear_fit(&xs, &ys)?;
        exponent_n_base = Some(ExponentialFit {
            base: slope.exp(),
            r_squared: r2,
            points: xs.len(),
        });
    }

    if exponent_s.is_none() && exponent_n_base.is_none() {
        return Err(Error::InsufficientData(
            "need at least 3 distinct pixel counts at one photon number, or 3 distinct photon numbers at one pixel count".into(),
        ));
    }
    Ok(ScalingFit {
        exponent_s,
        exponent_n_base,
    })
}

fn distinct<T: Copy + PartialOrd>(iter: impl Iterator<Item = T>) -> Vec<T> {
    let mut v: Vec<T> = iter.collect();
    v.sort_by(|a, b| a.partial_cmp(b).expect("no NaN keys"));
    v.dedup_by(|a, b| a == b);
    v
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return Err(Error::InsufficientData("fit needs at least 2 points".into()));
    }
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData(
            "degenerate fit: predictor has zero variance".into(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let syy: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok((slope, r_squared))
}
