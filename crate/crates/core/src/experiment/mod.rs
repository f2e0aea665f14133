//! Configuration, seeded sweeps and CSV output for the coherence, gain
//! profile, noise and overhead experiments.
//!
//! Every sweep returns a [`Table`] whose rendering ends with a
//! `# config_sha256=<hex> seed=<seed>` line; equal configurations and seeds
//! render byte-identical text.

mod config;
mod sweeps;

pub use config::{
    load_config, parse_config, CoherenceSection, EstimationSection, ExperimentConfig, Fig4Section,
    GridSection, LinkSection, SceneSection, TruthKind,
};
pub use sweeps::{
    coherence_report, noise_sweep_records, overhead_records, run_coherence, run_fig4,
    run_noise_sweep, run_overhead_report, NoiseRecord, OverheadRecord, Table,
};
