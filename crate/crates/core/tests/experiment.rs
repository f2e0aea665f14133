use oirs::experiment::{
    load_config, parse_config, run_coherence, run_fig4, run_noise_sweep, run_overhead_report,
    ExperimentConfig, TruthKind,
};

fn small_sweep() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::default();
    cfg.estimation.trials = 3;
    cfg.estimation.sigmas = vec![0.0, 1e-3];
    cfg.estimation.truth_model = TruthKind::Point;
    cfg
}

fn column(rows: &[String], k: usize) -> Vec<f64> {
    rows.iter().map(|r| r.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

#[test]
fn fig4_profile_properties() {
    let cfg = ExperimentConfig::default();
    let (table, report) = run_fig4(&cfg).unwrap();
    assert_eq!(table.header, "shift_m,gain_point_norm,gain_quad_norm,gain_taylor_norm");
    assert_eq!(table.rows.len(), 201);
    assert_eq!(table.rows[100], "0,1,1,1");

    let shift = column(&table.rows, 0);
    let point = column(&table.rows, 1);
    let taylor = column(&table.rows, 3);
    for k in 0..shift.len() {
        if shift[k].abs() <= 0.1 + 1e-12 {
            assert!((point[k] - taylor[k]).abs() <= 1e-3, "{} {} {}", shift[k], point[k], taylor[k]);
        }
    }
    let peak = (0..point.len()).max_by(|&a, &b| point[a].total_cmp(&point[b])).unwrap();
    assert!(point[..=peak].windows(2).all(|w| w[0] <= w[1]));
    assert!(point[peak..].windows(2).all(|w| w[0] >= w[1]));
    assert!(table.summary.iter().any(|l| l == &format!("d_c_m={}", report.d_c)));
}

#[test]
fn coherence_table_lists_profile_and_minimum() {
    let cfg = ExperimentConfig::default();
    let (table, report) = run_coherence(&cfg).unwrap();
    assert_eq!(table.header, "angle_rad,length_m");
    assert!(table.rows.len() >= cfg.coherence.angular_samples);
    let lengths = column(&table.rows, 1);
    let min = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(min, report.d_c);
    let text = table.render(&cfg);
    assert!(text.contains(&format!("# d_c_m={}\n", report.d_c)));
}

#[test]
fn overhead_rows() {
    let (table, records) = run_overhead_report(&ExperimentConfig::default()).unwrap();
    assert_eq!(table.header, "spacing,csi_params,flops_estimate");
    assert_eq!(
        table.rows,
        vec!["1,2304,1382400", "2,576,345600", "3,256,153600", "4,144,86400"]
    );
    assert_eq!(records[2].blocks, 64);
}

#[test]
fn noise_sweep_schema_and_floor() {
    let cfg = small_sweep();
    let (table, records) = run_noise_sweep(&cfg).unwrap();
    assert_eq!(table.header, "sigma,spacing,nmse_db,trials");
    assert_eq!(table.rows.len(), cfg.estimation.sigmas.len() * (cfg.estimation.spacings.len() + 1));
    let exact = records.iter().find(|r| r.sigma == 0.0 && r.spacing == 1).unwrap();
    assert!(exact.nmse_db <= -180.0, "{}", exact.nmse_db);
    assert!(records.iter().all(|r| r.trials == 3 && r.nmse_db.is_finite()));
}

#[test]
fn rendering_is_deterministic_and_carries_provenance() {
    let cfg = small_sweep();
    let a = run_noise_sweep(&cfg).unwrap().0.render(&cfg);
    let b = run_noise_sweep(&cfg).unwrap().0.render(&cfg);
    assert_eq!(a, b);
    let last = a.lines().last().unwrap();
    assert_eq!(last, format!("# config_sha256={} seed={}", cfg.sha256(), cfg.estimation.master_seed));
    let mut other = cfg.clone();
    other.estimation.master_seed += 1;
    assert_ne!(run_noise_sweep(&other).unwrap().0.render(&other), a);
}

#[test]
fn config_files_load_and_write() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    std::fs::write(&path, "[estimation]\ntrials = 7\n[coherence]\nplane = \"grid\"\n").unwrap();
    let cfg = load_config(&path).unwrap();
    assert_eq!(cfg.estimation.trials, 7);
    assert_eq!(parse_config(&cfg.to_toml()).unwrap(), cfg);
    assert!(load_config(&dir.path().join("missing.toml")).is_err());

    let (table, _) = run_overhead_report(&cfg).unwrap();
    let written = table.write(&dir.path().join("out"), &cfg).unwrap();
    assert_eq!(std::fs::read_to_string(written).unwrap(), table.render(&cfg));
}

#[test]
fn grid_plane_reading_is_available() {
    let mut cfg = ExperimentConfig::default();
    cfg.coherence.plane = oirs::coherence::ShiftPlane::Grid;
    let (_, report) = run_coherence(&cfg).unwrap();
    let normal = cfg.grid().unwrap().normal().into_inner();
    assert!(report.argmin_direction.dot(&normal).abs() < 1e-9);
    assert!(report.d_c > 0.05 && report.d_c < 0.2);
}
