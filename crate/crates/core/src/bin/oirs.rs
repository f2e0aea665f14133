use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oirs::experiment::{
    load_config, run_coherence, run_fig4, run_noise_sweep, run_overhead_report, ExperimentConfig,
};

#[derive(Parser)]
#[command(name = "oirs", version, about = "OIRS channel coherence and estimation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalised gain versus element shift (fig4.csv).
    Fig4(Common),
    /// NMSE versus noise level for every spacing (noise_sweep.csv).
    NoiseSweep(Common),
    /// CSI parameter count and flop estimate per spacing (overhead.csv).
    Overhead(Common),
    /// Coherence distance and per-direction lengths (coherence.csv).
    Coherence(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `estimation.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides OIRS_OUT_DIR and `output_dir`).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn resolve(&self) -> oirs::Result<(ExperimentConfig, PathBuf)> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.estimation.master_seed = seed;
        }
        let out = self
            .out
            .clone()
            .or_else(|| std::env::var_os("OIRS_OUT_DIR").map(PathBuf::from))
            .unwrap_or_else(|| cfg.output_dir.clone());
        Ok((cfg, out))
    }
}

fn run(cli: Cli) -> oirs::Result<()> {
    match cli.command {
        Command::Fig4(c) => {
            let (cfg, out) = c.resolve()?;
            let (table, report) = run_fig4(&cfg)?;
            let path = table.write(&out, &cfg)?;
            println!("d_c = {:.6} m (xi_c = {})", report.d_c, report.xi_c);
            println!("wrote {}", path.display());
        }
        Command::NoiseSweep(c) => {
            let (cfg, out) = c.resolve()?;
            let (table, records) = run_noise_sweep(&cfg)?;
            let path = table.write(&out, &cfg)?;
            for r in records {
                println!("sigma {:>8.1e}  spacing {}  NMSE {:8.2} dB", r.sigma, r.spacing, r.nmse_db);
            }
            println!("wrote {}", path.display());
        }
        Command::Overhead(c) => {
            let (cfg, out) = c.resolve()?;
            let (table, records) = run_overhead_report(&cfg)?;
            let path = table.write(&out, &cfg)?;
            for r in records {
                println!(
                    "spacing {}  blocks {}  params {}  flops {}",
                    r.spacing, r.blocks, r.csi_params, r.flops_estimate
                );
            }
            println!("wrote {}", path.display());
        }
        Command::Coherence(c) => {
            let (cfg, out) = c.resolve()?;
            let (table, report) = run_coherence(&cfg)?;
            let path = table.write(&out, &cfg)?;
            let d = report.argmin_direction;
            println!("d_c = {:.6} m (xi_c = {})", report.d_c, report.xi_c);
            println!("direction = ({:.4}, {:.4}, {:.4})", d.x, d.y, d.z);
            for (angle, length) in &report.profile {
                println!("{angle:.6}\t{length:.6}");
            }
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
