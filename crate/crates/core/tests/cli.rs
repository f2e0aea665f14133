use std::path::Path;
use std::process::{Command, Output};

fn oirs(args: &[&str], dir: &Path, env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_oirs"));
    cmd.args(args).current_dir(dir).env_remove("OIRS_OUT_DIR");
    if let Some(out) = env_out {
        cmd.env("OIRS_OUT_DIR", out);
    }
    cmd.output().unwrap()
}

#[test]
fn overhead_writes_csv_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let res = oirs(&["overhead", "--out", out.to_str().unwrap()], dir.path(), None);
    assert!(res.status.success());
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("spacing 2  blocks 144  params 576"));
    let csv = std::fs::read_to_string(out.join("overhead.csv")).unwrap();
    assert!(csv.starts_with("spacing,csi_params,flops_estimate\n1,2304,1382400\n"));
    assert!(csv.lines().last().unwrap().starts_with("# config_sha256="));
}

#[test]
fn output_directory_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let env_dir = dir.path().join("env");
    let flag_dir = dir.path().join("flag");
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, format!("output_dir = {:?}\n", dir.path().join("cfg").to_str().unwrap())).unwrap();
    let cfg = cfg.to_str().unwrap();

    assert!(oirs(&["coherence", "--config", cfg], dir.path(), None).status.success());
    assert!(dir.path().join("cfg/coherence.csv").exists());

    assert!(oirs(&["coherence", "--config", cfg], dir.path(), Some(&env_dir)).status.success());
    assert!(env_dir.join("coherence.csv").exists());

    let flag = flag_dir.to_str().unwrap();
    assert!(oirs(&["coherence", "--config", cfg, "--out", flag], dir.path(), Some(&env_dir)).status.success());
    assert!(flag_dir.join("coherence.csv").exists());
}

#[test]
fn seed_flag_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let res = oirs(&["fig4", "--seed", "123", "--out", out.to_str().unwrap()], dir.path(), None);
    assert!(res.status.success());
    let csv = std::fs::read_to_string(out.join("fig4.csv")).unwrap();
    assert!(csv.lines().last().unwrap().ends_with(" seed=123"));
    assert!(csv.contains("\n# d_c_m="));
}

#[test]
fn invalid_config_fails_with_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[estimation]\nsigmas = [-1.0]\n").unwrap();
    let res = oirs(&["noise-sweep", "--config", cfg.to_str().unwrap()], dir.path(), None);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("estimation.sigmas[0]"));

    let res = oirs(&["overhead", "--config", "does-not-exist.toml"], dir.path(), None);
    assert!(!res.status.success());
}
