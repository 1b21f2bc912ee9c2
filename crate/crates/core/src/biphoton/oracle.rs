//! Brute-force numerical propagation of the two-photon amplitude from the
//! source plane, through real finite-width slits, to the detection plane.
//!
//! This is the validation oracle for the closed-form route: it never uses
//! the delta-slit approximation or the (α, φ) parameterisation. The chain is
//!
//!   1. joint momentum amplitude Ẽ_p·Ξ̃ on a Gauss-Legendre tensor grid in
//!      rotated coordinates u = k₁+k₂, v = k₁−k₂;
//!   2. source → slit-plane hop of length Δz applied as the exact paraxial
//!      plane-wave phase e^{−i(k₁²+k₂²)Δz/2k₀} (the momentum-space form of
//!      the position-space Fresnel convolution, with no stationary-phase
//!      trouble); Δz = 0 selects the symbolic at-the-source limit;
//!   3. slit-plane field tabulated on quadrature nodes inside the two slit
//!      openings (the aperture function is 1 there and 0 elsewhere);
//!   4. Fresnel quadrature from the openings to every detector pair.
//!
//! Sample counts double per refinement level until two consecutive maps
//! agree in relative L¹; the refined map is returned.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::biphoton::{fresnel_kernel, PumpPhaseMatchProfiles};
use crate::error::{Error, Result};
use crate::geometry::{DetectorGrid, SlitGeometry};
use crate::pattern::{CoincidenceMap, Normalization};
use crate::quadrature::{pairwise_sum, GaussLegendre};

/// Tuning knobs for [`propagate_numeric`].
#[derive(Debug, Clone, Copy)]
pub struct OracleConfig {
    /// Base Gauss-Legendre nodes per slit opening, per photon.
    pub slit_points: usize,
    /// Relative L¹ agreement required between consecutive refinement levels.
    pub rel_tol: f64,
    /// Number of sample-count doublings to try beyond the base level.
    pub max_refinements: u32,
    /// Cap on tabulation memory, in MiB.
    pub memory_budget_mib: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            slit_points: 10,
            rel_tol: 5e-3,
            max_refinements: 2,
            memory_budget_mib: 512,
        }
    }
}

/// Relative L¹ distance between two maps of equal size, after scaling both
/// to unit total mass.
pub fn relative_l1(a: &CoincidenceMap, b: &CoincidenceMap) -> f64 {
    assert_eq!(
        a.values().len(),
        b.values().len(),
        "maps must share a grid"
    );
    let sa = pairwise_sum(a.values());
    let sb = pairwise_sum(b.values());
    let diffs: Vec<f64> = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x / sa - y / sb).abs())
        .collect();
    pairwise_sum(&diffs)
}

/// |Ψ(x₁, x₂)|² on the detector grid by the full quadrature chain.
///
/// `crystal_to_slit` ≥ 0 is the source-to-slit distance (0 = source at the
/// slit plane); `slit_to_screen` is the slit-to-detector distance. Slits
/// must have positive width; this route does not idealise them.
pub fn propagate_numeric(
    profiles: &PumpPhaseMatchProfiles,
    geom: &SlitGeometry,
    crystal_to_slit: f64,
    slit_to_screen: f64,
    grid: &DetectorGrid,
    norm: Normalization,
    cfg: &OracleConfig,
) -> Result<CoincidenceMap> {
    crate::error::require_positive(geom.slit_width, "slit width (this route needs real slits)")?;
    crate::error::require_positive(slit_to_screen, "slit-to-screen distance")?;
    crate::error::require_non_negative(crystal_to_slit, "source-to-slit distance")?;
    if cfg.slit_points < 2 {
        return Err(Error::InvalidInput(
            "need at least 2 quadrature nodes per slit opening".into(),
        ));
    }

    let mut prev: Option<Vec<f64>> = None;
    let mut last_change = f64::INFINITY;
    for level in 0..=cfg.max_refinements {
        let mult = 1usize << level;
        let raw = evaluate_level(profiles, geom, crystal_to_slit, slit_to_screen, grid, cfg, mult)?;
        if let Some(prev_raw) = prev {
            last_change = raw_relative_l1(&prev_raw, &raw);
            if last_change <= cfg.rel_tol {
                return CoincidenceMap::from_values(grid.detectors(), raw, norm);
            }
        }
        prev = Some(raw);
    }
    Err(Error::NonConvergent {
        estimate: last_change,
        tolerance: cfg.rel_tol,
    })
}

fn raw_relative_l1(a: &[f64], b: &[f64]) -> f64 {
    let sa = pairwise_sum(a);
    let sb = pairwise_sum(b);
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x / sa - y / sb).abs())
        .collect();
    pairwise_sum(&diffs)
}

fn evaluate_level(
    profiles: &PumpPhaseMatchProfiles,
    geom: &SlitGeometry,
    crystal_to_slit: f64,
    slit_to_screen: f64,
    grid: &DetectorGrid,
    cfg: &OracleConfig,
    mult: usize,
) -> Result<Vec<f64>> {
    let sup = &profiles.support;
    let n_u = sup.sum_points * mult;
    let n_v = sup.diff_points * mult;
    let per_opening = cfg.slit_points * mult;

    // Quadrature nodes inside the two slit openings (one photon's axis).
    let g_slit = GaussLegendre::new(per_opening);
    let half_d = geom.separation / 2.0;
    let half_a = geom.slit_width / 2.0;
    let mut slit_nodes: Vec<(f64, f64)> = Vec::with_capacity(2 * per_opening);
    slit_nodes.extend(g_slit.scaled(-half_d - half_a, -half_d + half_a));
    slit_nodes.extend(g_slit.scaled(half_d - half_a, half_d + half_a));
    let ng = slit_nodes.len();

    // Momentum nodes, flattened.
    let gu = GaussLegendre::new(n_u);
    let gv = GaussLegendre::new(n_v);
    let u_nodes: Vec<(f64, f64)> = gu.scaled(-sup.sum_half_width, sup.sum_half_width).collect();
    let v_nodes: Vec<(f64, f64)> = gv
        .scaled(-sup.diff_half_width, sup.diff_half_width)
        .collect();
    let n_uv = n_u * n_v;

    const CHUNK: usize = 4096;
    let n_chunks = n_uv.div_ceil(CHUNK);
    let map_bytes = ng * ng * std::mem::size_of::<Complex64>();
    let needed = map_bytes * (n_chunks + 2) + n_uv * std::mem::size_of::<Complex64>();
    if needed > cfg.memory_budget_mib * 1024 * 1024 {
        return Err(Error::MemoryBudget(format!(
            "level would need ~{} MiB (budget {} MiB)",
            needed / (1024 * 1024),
            cfg.memory_budget_mib
        )));
    }

    let k0 = geom.wavenumber;
    // Slit-plane joint field on the opening nodes, accumulated over fixed
    // momentum chunks. Chunk boundaries are independent of the thread
    // count, and the chunk partials are combined in index order, so the
    // result is bit-stable under parallelism.
    let partials: Vec<Vec<Complex64>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(n_uv);
            let mut acc = vec![Complex64::default(); ng * ng];
            let mut phase1 = vec![Complex64::default(); ng];
            let mut phase2 = vec![Complex64::default(); ng];
            for idx in lo..hi {
                let (u, wu) = u_nodes[idx / n_v];
                let (v, wv) = v_nodes[idx % n_v];
                let k1 = 0.5 * (u + v);
                let k2 = 0.5 * (u - v);
                let mut amp = profiles.joint(k1, k2) * (0.5 * wu * wv);
                if amp == Complex64::default() {
                    continue;
                }
                if crystal_to_slit > 0.0 {
                    amp *= Complex64::from_polar(
                        1.0,
                        -(k1 * k1 + k2 * k2) * crystal_to_slit / (2.0 * k0),
                    );
                }
                for (g, &(x, _)) in slit_nodes.iter().enumerate() {
                    phase1[g] = Complex64::from_polar(1.0, -k1 * x);
                    phase2[g] = Complex64::from_polar(1.0, -k2 * x);
                }
                for g1 in 0..ng {
                    let row = amp * phase1[g1];
                    let out = &mut acc[g1 * ng..(g1 + 1) * ng];
                    for (slot, p2) in out.iter_mut().zip(&phase2) {
                        *slot += row * p2;
                    }
                }
            }
            acc
        })
        .collect();
    let mut slit_field = vec![Complex64::default(); ng * ng];
    for part in &partials {
        for (slot, val) in slit_field.iter_mut().zip(part) {
            *slot += *val;
        }
    }

    // Fresnel quadrature from the openings to the detector pairs:
    // Ψ(x_i, x_j) = Σ_{g1,g2} w_{g1} h(x_i, x_{g1}) · w_{g2} h(x_j, x_{g2})
    //               · Ψ_slit(x_{g1}, x_{g2}),
    // done as two small matrix products.
    let nd = grid.detectors();
    let positions: Vec<f64> = grid.indices().map(|s| grid.position(s)).collect();
    let mut h = vec![Complex64::default(); nd * ng];
    for (i, &x) in positions.iter().enumerate() {
        for (g, &(xs, ws)) in slit_nodes.iter().enumerate() {
            h[i * ng + g] = fresnel_kernel(x, xs, slit_to_screen, k0) * ws;
        }
    }
    // t[g1][j] = Σ_{g2} slit_field[g1][g2] · h[j][g2]
    let t: Vec<Complex64> = (0..ng * nd)
        .into_par_iter()
        .map(|idx| {
            let g1 = idx / nd;
            let j = idx % nd;
            let mut s = Complex64::default();
            for g2 in 0..ng {
                s += slit_field[g1 * ng + g2] * h[j * ng + g2];
            }
            s
        })
        .collect();
    let raw: Vec<f64> = (0..nd * nd)
        .into_par_iter()
        .map(|idx| {
            let i = idx / nd;
            let j = idx % nd;
            let mut s = Complex64::default();
            for g1 in 0..ng {
                s += h[i * ng + g1] * t[g1 * nd + j];
            }
            s.norm_sqr()
        })
        .collect();
    Ok(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_delta_slits_and_bad_distances() {
        let geom = SlitGeometry::new(1e-3, 0.0, 1.0, 2.0 * std::f64::consts::PI / 1e-6).unwrap();
        let grid = DetectorGrid::new(10, 1e-4).unwrap();
        let profiles =
            PumpPhaseMatchProfiles::gaussian_pump_gaussian_correlation(5e-3, 1e-4).unwrap();
        let cfg = OracleConfig::default();
        assert!(propagate_numeric(
            &profiles,
            &geom,
            0.0,
            1.0,
            &grid,
            Normalization::UnitMax,
            &cfg
        )
        .is_err());
        let geom = SlitGeometry::new(1e-3, 2e-5, 1.0, 2.0 * std::f64::consts::PI / 1e-6).unwrap();
        assert!(propagate_numeric(
            &profiles,
            &geom,
            -1.0,
            1.0,
            &grid,
            Normalization::UnitMax,
            &cfg
        )
        .is_err());
        assert!(propagate_numeric(
            &profiles,
            &geom,
            0.0,
            0.0,
            &grid,
            Normalization::UnitMax,
            &cfg
        )
        .is_err());
    }

    #[test]
    fn memory_budget_is_enforced() {
        let geom = SlitGeometry::new(1e-3, 2e-5, 1.0, 2.0 * std::f64::consts::PI / 1e-6).unwrap();
        let grid = DetectorGrid::new(10, 1e-4).unwrap();
        let profiles =
            PumpPhaseMatchProfiles::gaussian_pump_gaussian_correlation(5e-3, 1e-4).unwrap();
        let cfg = OracleConfig {
            memory_budget_mib: 0,
            ..OracleConfig::default()
        };
        assert!(matches!(
            propagate_numeric(&profiles, &geom, 0.0, 1.0, &grid, Normalization::UnitMax, &cfg),
            Err(Error::MemoryBudget(_))
        ));
    }
}
