//! Pilot overhead and flop counts per spacing.

use oirs::experiment::{overhead_records, ExperimentConfig};

fn main() -> oirs::Result<()> {
    for r in overhead_records(&ExperimentConfig::default())? {
        println!("spacing {}: {} blocks, {} CSI parameters, {} flops", r.spacing, r.blocks, r.csi_params, r.flops_estimate);
    }
    Ok(())
}
