//! A small Monte Carlo NMSE sweep over noise level and spacing.

use oirs::experiment::{run_noise_sweep, ExperimentConfig};

fn main() -> oirs::Result<()> {
    let mut cfg = ExperimentConfig::default();
    cfg.estimation.trials = 5;
    cfg.estimation.sigmas = vec![1e-5, 1e-4, 1e-3];
    let (_, records) = run_noise_sweep(&cfg)?;
    for r in records {
        println!("sigma {:.0e}  spacing {}  NMSE {:8.2} dB", r.sigma, r.spacing, r.nmse_db);
    }
    Ok(())
}
