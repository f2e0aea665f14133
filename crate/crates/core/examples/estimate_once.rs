//! One pass of subarray estimation plus interpolation at each spacing.

use oirs::channel::{SceneConfig, TruthModel};
use oirs::estimator::Estimator;
use oirs::metrics::to_db;

fn main() -> oirs::Result<()> {
    let scene = SceneConfig::default();
    let sigma = 1e-4;
    for spacing in [1, 2, 3, 4] {
        let est = Estimator::new(&scene, spacing, TruthModel::Quadrature(8))?;
        let res = est.run(100, 1.0, sigma, 7)?;
        println!(
            "spacing {spacing}: {:>3} blocks, {:>4} CSI parameters, {:>7} flops, NMSE {:.2} dB",
            res.block_count,
            res.csi_parameter_count,
            res.flops_estimate,
            to_db(res.nmse)
        );
    }
    Ok(())
}
