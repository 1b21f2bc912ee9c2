use serde::Serialize;

use noonlith::{
    cubic_term_magnitude, delta_pair_coincidence, gaussian, noon_pair_coincidence,
    visibility_conditions, CoincidenceMap, DetectorGrid,
};

use crate::args::{GaussianArgs, GaussianMode};
use crate::error::CliError;

pub fn run(args: &GaussianArgs, command: String) -> Result<(), CliError> {
    match &args.mode {
        GaussianMode::Scan {
            setup,
            model,
            extent,
            points,
            no_cubic,
            output,
        } => {
            let setup = setup.build()?;
            let half = extent.unwrap_or_else(|| 10.0 * fringe_spacing(&setup));
            let scan = gaussian::scan(
                &setup,
                (*model).into(),
                -half,
                half,
                *points,
                !*no_cubic,
            )?;
            if !setup.within_validity(half) {
                eprintln!(
                    "warning: scan reaches beyond L/10·sin(α); the small-offset expansion is strained"
                );
            }
            let files = output.sink(command).write_scan("scan", &scan)?;
            report(&files);
        }
        GaussianMode::Pair {
            setup,
            model,
            extent,
            grid,
            output,
        } => {
            let setup = setup.build()?;
            let half = extent.unwrap_or_else(|| 5.0 * fringe_spacing(&setup));
            let grid = DetectorGrid::with_detectors(*grid, 2.0 * half / (*grid as f64 - 1.0))?;
            let map = CoincidenceMap::from_fn(&grid, output.norm.into(), |s, t| {
                let (x1, x2) = (grid.position(s), grid.position(t));
                match model {
                    crate::args::ScanModelArg::Noon => noon_pair_coincidence(&setup, x1, x2),
                    crate::args::ScanModelArg::Delta => delta_pair_coincidence(&setup, x1, x2),
                }
            })?;
            let files = output.sink(command).write_map("pair", &map, &grid)?;
            report(&files);
        }
        GaussianMode::CheckCubic { setup, x, output } => {
            let setup = setup.build()?;
            let r = cubic_term_magnitude(&setup, *x);
            let summary = CubicSummary {
                x: *x,
                linear_coeff: r.linear_coeff,
                cubic_coeff: r.cubic_coeff,
                prefactor_ratio: r.prefactor_ratio(),
                term_ratio: r.term_ratio,
            };
            println!(
                "linear (x/λ) prefactor  = {:.6e}\ncubic (x/λ)³ prefactor  = {:.6e}\nprefactor ratio         = {:.3e} (10^{:.1})\nterm ratio at x = {} m  = {:.3e}",
                summary.linear_coeff,
                summary.cubic_coeff,
                summary.prefactor_ratio,
                summary.prefactor_ratio.log10(),
                x,
                summary.term_ratio
            );
            let file = output
                .sink(command)
                .write_json("cubic", "cubic_term_report", &summary)?;
            report(&[file]);
        }
        GaussianMode::Visibility { setup, output } => {
            let setup = setup.build()?;
            let cond = visibility_conditions(&setup);
            println!(
                "x_low  = {:.6e} m\nx_high = {:.6e} m\nalways satisfied: {}",
                cond.x_low, cond.x_high, cond.always_satisfied
            );
            let file = output
                .sink(command)
                .write_json("visibility", "visibility_conditions", &cond)?;
            report(&[file]);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CubicSummary {
    x: f64,
    linear_coeff: f64,
    cubic_coeff: f64,
    prefactor_ratio: f64,
    term_ratio: f64,
}

fn fringe_spacing(setup: &noonlith::GaussianNoonSetup) -> f64 {
    setup.wavelength / (2.0 * setup.photons as f64 * setup.beam_angle.sin())
}

fn report(files: &[std::path::PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}
