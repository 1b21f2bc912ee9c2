use serde::Serialize;

use noonlith::{
    boto_coincidence, detection_amplitude, panel_map, propagate_numeric, single_photon_pattern,
    slit_amplitudes, steuernagel_coincidence, BiphotonSlitState, OracleConfig, Panel,
};

use crate::args::{PatternArgs, PatternMode};
use crate::error::CliError;
use crate::units::degrees_to_radians;

pub fn run(args: &PatternArgs, command: String) -> Result<(), CliError> {
    match &args.mode {
        PatternMode::Single { geometry, output } => {
            let (geom, grid) = geometry.build()?;
            warn_paraxial(&geom);
            let pattern = single_photon_pattern(&geom, &grid, output.norm.into());
            let files = output
                .sink(command)
                .write_pattern("single", &pattern, &grid)?;
            report(&files);
        }
        PatternMode::Boto { geometry, output } => {
            let (geom, grid) = geometry.build()?;
            warn_paraxial(&geom);
            let map = boto_coincidence(&geom, &grid, output.norm.into());
            let files = output.sink(command).write_map("boto", &map, &grid)?;
            report(&files);
        }
        PatternMode::Steuernagel { geometry, output } => {
            let (geom, grid) = geometry.build()?;
            warn_paraxial(&geom);
            let map = steuernagel_coincidence(&geom, &grid, output.norm.into());
            let files = output.sink(command).write_map("steuernagel", &map, &grid)?;
            report(&files);
        }
        PatternMode::A1 {
            panel,
            geometry,
            output,
        } => {
            let panel: Panel = panel.parse()?;
            let (geom, grid) = geometry.build()?;
            warn_paraxial(&geom);
            let map = panel_map(panel, &geom, &grid, output.norm.into())?;
            let name = format!("a1_{panel:?}").to_lowercase();
            let files = output.sink(command).write_map(&name, &map, &grid)?;
            report(&files);
        }
        PatternMode::Detect {
            alpha_deg,
            phi_deg,
            geometry,
            output,
        } => {
            let (geom, grid) = geometry.build()?;
            warn_paraxial(&geom);
            let state = BiphotonSlitState::from_alpha_phi(
                degrees_to_radians(*alpha_deg),
                degrees_to_radians(*phi_deg),
            );
            let map = detection_amplitude(state, geom).sample_map(&grid, output.norm.into())?;
            let files = output.sink(command).write_map("detect", &map, &grid)?;
            report(&files);
        }
        PatternMode::Amplitudes {
            geometry,
            profiles,
            output,
        } => {
            let (geom, _) = geometry.build()?;
            let profiles = profiles.build(geom.wavenumber)?;
            let state = slit_amplitudes(&profiles, &geom)?;
            let (c11, c12, _, _) = state.amplitudes();
            let summary = AmplitudeSummary {
                alpha: state.alpha(),
                phi: state.phi(),
                same_slit: [c11.re, c11.im],
                opposite_slit: [c12.re, c12.im],
            };
            println!(
                "alpha = {:.6} rad, phi = {:.6} rad, |c_same| = {:.6}, |c_opposite| = {:.6}",
                summary.alpha,
                summary.phi,
                c11.norm(),
                c12.norm()
            );
            let file = output
                .sink(command)
                .write_json("amplitudes", "slit_amplitudes", &summary)?;
            report(&[file]);
        }
        PatternMode::Oracle {
            geometry,
            profiles,
            crystal_to_slit,
            oracle_tol,
            oracle_refinements,
            output,
        } => {
            let (geom, grid) = geometry.build()?;
            let profiles = profiles.build(geom.wavenumber)?;
            let cfg = OracleConfig {
                rel_tol: *oracle_tol,
                max_refinements: *oracle_refinements,
                ..OracleConfig::default()
            };
            let map = propagate_numeric(
                &profiles,
                &geom,
                *crystal_to_slit,
                geom.screen_distance,
                &grid,
                output.norm.into(),
                &cfg,
            )?;
            let files = output.sink(command).write_map("oracle", &map, &grid)?;
            report(&files);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct AmplitudeSummary {
    alpha: f64,
    phi: f64,
    /// Canonical c̃11 = c̃22 as [re, im].
    same_slit: [f64; 2],
    /// Canonical c̃12 = c̃21 as [re, im].
    opposite_slit: [f64; 2],
}

fn report(files: &[std::path::PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn warn_paraxial(geom: &noonlith::SlitGeometry) {
    if geom.paraxial_warning() {
        eprintln!(
            "warning: screen distance below 100 slit separations; paraxial treatment is strained"
        );
    }
}
