use nalgebra::DMatrix;
use rayon::prelude::*;

use super::interp::interpolate_lattice;
use super::layout::SubarrayLayout;
use super::mmse::mmse_estimate;
use crate::channel::{build_csi_tensor, generate_pilots_with, simulate_rx_with, CsiTensor, SceneConfig, TruthModel};
use crate::error::{Error, Result};
use crate::metrics::nmse;
use crate::seed::stream_rng;

/// Output of one run of the three-phase estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationResult {
    pub estimate: CsiTensor,
    /// `Nr x Nt` estimate of every block, indexed by block.
    pub block_estimates: Vec<DMatrix<f64>>,
    pub nmse: f64,
    pub csi_parameter_count: usize,
    pub flops_estimate: u64,
    pub block_count: usize,
    pub pilot_slots: usize,
}

/// `Q P Nt^2 (Nt + 2 Nr)`: block count times the per-block cost of the
/// ridge solve.
pub fn flops_estimate(nt: usize, nr: usize, pilots: usize, blocks: usize) -> u64 {
    let (nt, nr, p, q) = (nt as u64, nr as u64, pilots as u64, blocks as u64);
    q * p * nt * nt * (nt + 2 * nr)
}

/// Lattice of per-block estimates of one pair: entry `(a, b)` is the
/// `(pd, led)` entry of the block that measured lattice point `(a, b)`.
pub fn gather_samples(
    blocks: &[Option<DMatrix<f64>>],
    layout: &SubarrayLayout,
    pd: usize,
    led: usize,
) -> Result<DMatrix<f64>> {
    if blocks.len() != layout.block_count() {
        return Err(Error::Shape(format!(
            "{} block estimates for {} blocks",
            blocks.len(),
            layout.block_count()
        )));
    }
    let lattice = layout.lattice(pd, led);
    let mut out = DMatrix::zeros(lattice.rows.len(), lattice.cols.len());
    for b in 0..lattice.cols.len() {
        for a in 0..lattice.rows.len() {
            let q = lattice.block[(a, b)];
            let est = blocks[q].as_ref().ok_or(Error::IncompleteEstimation(q))?;
            out[(a, b)] = est[(pd, led)];
        }
    }
    Ok(out)
}

/// Gain field of one pair on the whole grid (`rows x cols`), interpolated
/// from its lattice samples in element-index coordinates.
pub fn interpolate_full(
    samples: &DMatrix<f64>,
    layout: &SubarrayLayout,
    pd: usize,
    led: usize,
) -> Result<DMatrix<f64>> {
    let lattice = layout.lattice(pd, led);
    let as_f64 = |v: &[usize]| v.iter().map(|&k| k as f64).collect::<Vec<_>>();
    let targets = |n: usize| (0..n).map(|k| k as f64).collect::<Vec<_>>();
    interpolate_lattice(
        samples,
        &as_f64(&lattice.rows),
        &as_f64(&lattice.cols),
        &targets(layout.rows()),
        &targets(layout.cols()),
    )
}

/// Ground truth and layout shared by repeated estimation runs.
#[derive(Debug, Clone)]
pub struct Estimator {
    truth: CsiTensor,
    layout: SubarrayLayout,
}

impl Estimator {
    pub fn new(scene: &SceneConfig, spacing: usize, truth_model: TruthModel) -> Result<Self> {
        let layout = SubarrayLayout::for_grid(&scene.grid, scene.nt(), scene.nr(), spacing)?;
        Self::with_truth(build_csi_tensor(scene, truth_model)?, layout)
    }

    pub fn with_truth(truth: CsiTensor, layout: SubarrayLayout) -> Result<Self> {
        if truth.elements() != layout.elements() || truth.nt() != layout.nt() || truth.nr() != layout.nr() {
            return Err(Error::Shape(format!(
                "truth has {} elements and {}x{} pairs, layout {} and {}x{}",
                truth.elements(),
                truth.nr(),
                truth.nt(),
                layout.elements(),
                layout.nr(),
                layout.nt()
            )));
        }
        Ok(Self { truth, layout })
    }

    pub fn truth(&self) -> &CsiTensor {
        &self.truth
    }

    pub fn layout(&self) -> &SubarrayLayout {
        &self.layout
    }

    /// `Nr x Nt` channel while block `q` is active.
    pub fn block_channel(&self, q: usize) -> DMatrix<f64> {
        let mut h = DMatrix::zeros(self.layout.nr(), self.layout.nt());
        for a in self.layout.block(q) {
            h[(a.pd, a.led)] += self.truth.gain(a.element, a.pd, a.led);
        }
        h
    }

    /// Pilots, noise and ridge estimate of block `q`; block `q` draws from
    /// stream `q` of `seed`.
    pub fn estimate_block(
        &self,
        q: usize,
        pilots: usize,
        pilot_power: f64,
        sigma: f64,
        seed: u64,
    ) -> Result<DMatrix<f64>> {
        let mut rng = stream_rng(seed, q as u64);
        let x = generate_pilots_with(&mut rng, self.layout.nt(), pilots, pilot_power)?;
        let y = simulate_rx_with(&mut rng, &self.block_channel(q), &x, sigma)?;
        mmse_estimate(&y, &x, sigma)
    }

    pub fn run(&self, pilots: usize, pilot_power: f64, sigma: f64, seed: u64) -> Result<EstimationResult> {
        let blocks = (0..self.layout.block_count())
            .into_par_iter()
            .map(|q| self.estimate_block(q, pilots, pilot_power, sigma, seed))
            .collect::<Result<Vec<_>>>()?;
        self.recover(blocks, pilots)
    }

    /// Phase III: interpolate every pair from the block estimates.
    pub fn recover(&self, blocks: Vec<DMatrix<f64>>, pilots: usize) -> Result<EstimationResult> {
        let (nt, nr) = (self.layout.nt(), self.layout.nr());
        let wrapped: Vec<Option<DMatrix<f64>>> = blocks.into_iter().map(Some).collect();
        let mut estimate = CsiTensor::zeros(self.layout.elements(), nt, nr);
        for led in 0..nt {
            for pd in 0..nr {
                let samples = gather_samples(&wrapped, &self.layout, pd, led)?;
                let field = interpolate_full(&samples, &self.layout, pd, led)?;
                let col = estimate.column_index(pd, led);
                estimate.matrix_mut().column_mut(col).copy_from_slice(field.as_slice());
            }
        }
        let nmse = nmse(&estimate, &self.truth)?;
        let block_count = self.layout.block_count();
        Ok(EstimationResult {
            estimate,
            block_estimates: wrapped.into_iter().map(|b| b.expect("all present")).collect(),
            nmse,
            csi_parameter_count: self.layout.csi_parameter_count(),
            flops_estimate: flops_estimate(nt, nr, pilots, block_count),
            block_count,
            pilot_slots: pilots,
        })
    }
}

/// Builds the truth for `scene` and runs all three phases once.
pub fn run_algorithm1(
    scene: &SceneConfig,
    spacing: usize,
    pilots: usize,
    sigma: f64,
    pilot_power: f64,
    seed: u64,
    truth_model: TruthModel,
) -> Result<EstimationResult> {
    Estimator::new(scene, spacing, truth_model)?.run(pilots, pilot_power, sigma, seed)
}
