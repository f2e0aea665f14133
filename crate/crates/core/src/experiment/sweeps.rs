use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::ExperimentConfig;
use crate::channel::{aperture_gain, point_gain, GainConstant};
use crate::coherence::{coherence_distance, shift_axes, taylor_coeffs, CoherenceReport};
use crate::error::{Error, Result};
use crate::estimator::{flops_estimate, Estimator, SubarrayLayout};
use crate::metrics::to_db;
use crate::seed::derive_seed;

/// CSV rows plus `#` summary lines written after the data.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub header: &'static str,
    pub rows: Vec<String>,
    pub summary: Vec<String>,
}

impl Table {
    /// CSV text ending with the provenance line
    /// `# config_sha256=<hex> seed=<seed>`.
    pub fn render(&self, cfg: &ExperimentConfig) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.header).unwrap();
        for row in &self.rows {
            writeln!(out, "{row}").unwrap();
        }
        for line in &self.summary {
            writeln!(out, "# {line}").unwrap();
        }
        writeln!(out, "# config_sha256={} seed={}", cfg.sha256(), cfg.estimation.master_seed).unwrap();
        out
    }

    /// Writes `<dir>/<name>` and returns its path.
    pub fn write(&self, dir: &Path, cfg: &ExperimentConfig) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(self.name);
        std::fs::write(&path, self.render(cfg))?;
        Ok(path)
    }
}

pub fn coherence_report(cfg: &ExperimentConfig) -> Result<CoherenceReport> {
    let link = cfg.link_geometry()?;
    let axes = shift_axes(&link, &cfg.grid()?, cfg.coherence.plane)?;
    coherence_distance(&link, axes, cfg.coherence.xi_c, cfg.coherence.angular_samples)
}

/// Coherence length per direction and the minimum `d_c`.
pub fn run_coherence(cfg: &ExperimentConfig) -> Result<(Table, CoherenceReport)> {
    let report = coherence_report(cfg)?;
    let rows = report.profile.iter().map(|(a, l)| format!("{a},{l}")).collect();
    let d = report.argmin_direction;
    let table = Table {
        name: "coherence.csv",
        header: "angle_rad,length_m",
        rows,
        summary: vec![
            format!("d_c_m={}", report.d_c),
            format!("argmin_angle_rad={}", report.argmin_angle),
            format!("argmin_direction={},{},{}", d.x, d.y, d.z),
            format!("xi_c={}", report.xi_c),
        ],
    };
    Ok((table, report))
}

/// Normalised gain of the configured link against an element shift along
/// the first shift axis: point model, aperture quadrature with the mirror
/// held at its zero-shift orientation, and the second-order expansion.
pub fn run_fig4(cfg: &ExperimentConfig) -> Result<(Table, CoherenceReport)> {
    let link = cfg.link_geometry()?;
    let grid = cfg.grid()?;
    let (axis, _) = shift_axes(&link, &grid, cfg.coherence.plane)?;
    let axis = axis.into_inner();
    let normal = link.aligned_normal()?;
    let coeffs = taylor_coeffs(&link)?;
    let side = grid.element_size();
    let order = cfg.fig4.quadrature_order;
    let quad = |l: &crate::channel::LinkGeometry| {
        aperture_gain(l, &normal, side, &axis, order, GainConstant::Unit)
    };
    let h0 = point_gain(&link, GainConstant::Unit);
    let q0 = quad(&link)?;
    if h0 == 0.0 || q0 == 0.0 {
        return Err(Error::ZeroGain);
    }
    let n = cfg.fig4.shift_points;
    let extent = cfg.fig4.shift_extent;
    let half = (n / 2) as f64;
    let rows = (0..n)
        .map(|k| {
            let shift = extent * (k as f64 - half) / half;
            let shifted = link.shifted(&(axis * shift))?;
            let p = point_gain(&shifted, GainConstant::Unit) / h0;
            let q = quad(&shifted)? / q0;
            let t = 1.0 + coeffs.growth(&(axis * shift));
            Ok(format!("{shift},{p},{q},{t}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = coherence_report(cfg)?;
    let table = Table {
        name: "fig4.csv",
        header: "shift_m,gain_point_norm,gain_quad_norm,gain_taylor_norm",
        rows,
        summary: vec![format!("d_c_m={}", report.d_c), format!("xi_c={}", report.xi_c)],
    };
    Ok((table, report))
}

/// One point of the noise sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseRecord {
    pub sigma: f64,
    pub spacing: usize,
    /// Mean NMSE over the trials (linear scale).
    pub nmse: f64,
    pub nmse_db: f64,
    pub trials: usize,
}

/// Mean NMSE for every `(sigma, spacing)`; trial `t` at sigma index `i` uses
/// seed `derive_seed(master_seed, [i, t])` for every spacing.
pub fn noise_sweep_records(cfg: &ExperimentConfig) -> Result<Vec<NoiseRecord>> {
    let scene = cfg.scene_config()?;
    let est = &cfg.estimation;
    let spacings = est.spacings_with_baseline();
    let truth = crate::channel::build_csi_tensor(&scene, est.truth())?;
    let estimators = spacings
        .iter()
        .map(|&s| {
            let layout = SubarrayLayout::for_grid(&scene.grid, scene.nt(), scene.nr(), s)?;
            Estimator::with_truth(truth.clone(), layout)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut records = Vec::with_capacity(est.sigmas.len() * spacings.len());
    for (i, &sigma) in est.sigmas.iter().enumerate() {
        for (estimator, &spacing) in estimators.iter().zip(&spacings) {
            let total = (0..est.trials)
                .into_par_iter()
                .map(|t| {
                    let seed = derive_seed(est.master_seed, &[i as u64, t as u64]);
                    estimator.run(est.pilots, est.pilot_power, sigma, seed).map(|r| r.nmse)
                })
                .collect::<Result<Vec<_>>>()?
                .iter()
                .sum::<f64>();
            let nmse = total / est.trials as f64;
            records.push(NoiseRecord {
                sigma,
                spacing,
                nmse,
                nmse_db: to_db(nmse),
                trials: est.trials,
            });
        }
    }
    Ok(records)
}

pub fn run_noise_sweep(cfg: &ExperimentConfig) -> Result<(Table, Vec<NoiseRecord>)> {
    let records = noise_sweep_records(cfg)?;
    let rows = records
        .iter()
        .map(|r| format!("{},{},{},{}", r.sigma, r.spacing, r.nmse_db, r.trials))
        .collect();
    let table = Table {
        name: "noise_sweep.csv",
        header: "sigma,spacing,nmse_db,trials",
        rows,
        summary: vec![],
    };
    Ok((table, records))
}

/// CSI parameter count and flop estimate of one spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverheadRecord {
    pub spacing: usize,
    pub blocks: usize,
    pub csi_params: usize,
    pub flops_estimate: u64,
}

pub fn overhead_records(cfg: &ExperimentConfig) -> Result<Vec<OverheadRecord>> {
    let scene = cfg.scene_config()?;
    cfg.estimation
        .spacings_with_baseline()
        .into_iter()
        .map(|spacing| {
            let layout = SubarrayLayout::for_grid(&scene.grid, scene.nt(), scene.nr(), spacing)?;
            Ok(OverheadRecord {
                spacing,
                blocks: layout.block_count(),
                csi_params: layout.csi_parameter_count(),
                flops_estimate: flops_estimate(scene.nt(), scene.nr(), cfg.estimation.pilots, layout.block_count()),
            })
        })
        .collect()
}

pub fn run_overhead_report(cfg: &ExperimentConfig) -> Result<(Table, Vec<OverheadRecord>)> {
    let records = overhead_records(cfg)?;
    let rows = records
        .iter()
        .map(|r| format!("{},{},{}", r.spacing, r.csi_params, r.flops_estimate))
        .collect();
    let table = Table {
        name: "overhead.csv",
        header: "spacing,csi_params,flops_estimate",
        rows,
        summary: vec![],
    };
    Ok((table, records))
}
