use serde::Serialize;

use noonlith::{
    exposure_scaling_law, fit_scaling, simulate_exposure, ExposureConfig, ExposureResult,
    ScalingFit, Weighting,
};

use crate::args::ExposeArgs;
use crate::error::CliError;

pub fn run(args: &ExposeArgs, command: String) -> Result<(), CliError> {
    let weighting = match args.fringe_theta {
        Some(theta) => Weighting::Fringe { theta },
        None => Weighting::Uniform,
    };
    let mut results: Vec<ExposureResult> = Vec::new();
    for &pixels in &args.pixels {
        for &photons in &args.photons {
            let cfg = ExposureConfig {
                pixels,
                photons,
                target_events: args.target_events,
                model: args.model.into(),
                weighting,
                seed: args.seed,
                trials: args.trials,
                node_threshold: args.node_threshold,
                max_bunches: args.max_bunches,
            };
            results.push(simulate_exposure(&cfg)?);
        }
    }

    println!("model {:?}, {} trials, seed {}", args.model, args.trials, args.seed);
    println!(
        "{:>8} {:>4} {:>14} {:>12} {:>12} {:>10}",
        "pixels", "N", "mean_bunches", "std_error", "analytic", "ratio"
    );
    let mut rows = Vec::new();
    for r in &results {
        let law = exposure_scaling_law(r.config.model, r.config.pixels as u64, r.config.photons)?;
        // Ratio to the previous photon number at the same pixel count.
        let ratio = results
            .iter()
            .find(|p| {
                p.config.pixels == r.config.pixels && p.config.photons + 1 == r.config.photons
            })
            .map(|p| r.mean_bunches / p.mean_bunches);
        println!(
            "{:>8} {:>4} {:>14.2} {:>12.2} {:>12.3e} {:>10}",
            r.config.pixels,
            r.config.photons,
            r.mean_bunches,
            r.std_error,
            law,
            ratio.map_or("-".to_string(), |x| format!("{x:.2}")),
        );
        rows.push(SummaryRow {
            pixels: r.config.pixels,
            photons: r.config.photons,
            mean_bunches: r.mean_bunches,
            std_error: r.std_error,
            analytic_law: law,
            ratio_to_previous_photon_count: ratio,
        });
    }

    let fits = fit_scaling(&results, !args.raw_fit).ok();
    if let Some(fits) = &fits {
        if let Some(s) = &fits.exponent_s {
            println!(
                "pixel-count exponent: {:.3} (r² = {:.4}, {} points{})",
                s.exponent,
                s.r_squared,
                s.points,
                if args.raw_fit {
                    ", raw"
                } else {
                    ", coupon-collector factor removed"
                }
            );
        }
        if let Some(n) = &fits.exponent_n_base {
            println!(
                "per-photon growth base: {:.3} (r² = {:.4}, {} points)",
                n.base, n.r_squared, n.points
            );
        }
    }

    let doc = ExposeDocument {
        summary: rows,
        fits,
        runs: &results,
    };
    let file = args
        .output
        .sink(command)
        .write_json("expose", "exposure_sweep", &doc)?;
    println!("wrote {}", file.display());
    Ok(())
}

#[derive(Serialize)]
struct SummaryRow {
    pixels: usize,
    photons: u32,
    mean_bunches: f64,
    std_error: f64,
    analytic_law: f64,
    ratio_to_previous_photon_count: Option<f64>,
}

#[derive(Serialize)]
struct ExposeDocument<'a> {
    summary: Vec<SummaryRow>,
    fits: Option<ScalingFit>,
    runs: &'a [ExposureResult],
}
