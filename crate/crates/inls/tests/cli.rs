//! End-to-end checks of the command-line interface.

use std::process::Command;

fn inls() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inls"))
}

fn write_config(dir: &std::path::Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn ground_state_prints_invariants() {
    let out = inls().arg("ground-state").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("grad_norm_sq = 8.37758"), "{text}");
    assert!(text.contains("threshold_energy = 2.09439"), "{text}");
}

#[test]
fn check_coefficient_reports_rational_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[coefficient]\nfamily = rational\na = 1.0\nd = 0.0\nc = 1.0\n",
    );
    let out = inls()
        .args(["check-coefficient", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("variational_ok=false"), "{text}");

    let out = inls()
        .args(["check-coefficient", "--json", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    let doc: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("--json output parses");
    assert_eq!(doc["variational_ok"], serde_json::Value::Bool(false));
}

#[test]
fn shoot_emits_trajectory_csv() {
    let out = inls()
        .args(["shoot", "--q0", "1.0", "--r-max", "10.0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r,Q,Qprime,H,V_int,V_bdry"));
    let first = lines.next().unwrap();
    assert_eq!(first.split(',').count(), 6);
}

#[test]
fn evolve_writes_outputs_and_respects_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[initial]\nprofile = gaussian\namplitude = 0.3\n\
         [grid]\nr_max = 30.0\nn = 255\n\
         [controls]\ndt0 = 1e-2\nt_end = 0.1\nrecord_every = 5\n",
    );
    let out_dir = dir.path().join("results");
    let out = inls()
        .args(["evolve", "--json", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["region"], "ScatterHypothesis");
    let hash = doc["config_hash"].as_str().unwrap();
    assert!(out_dir.join(format!("run-{}-series.csv", &hash[..12])).exists());
    assert!(out_dir
        .join(format!("run-{}-verdict.json", &hash[..12]))
        .exists());
}

#[test]
fn out_dir_env_beats_config_and_flag_beats_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_dir = dir.path().join("from-config");
    let env_dir = dir.path().join("from-env");
    let flag_dir = dir.path().join("from-flag");
    let cfg = write_config(
        dir.path(),
        &format!(
            "[initial]\nprofile = gaussian\namplitude = 0.1\n\
             [grid]\nr_max = 20.0\nn = 127\n\
             [controls]\ndt0 = 1e-2\nt_end = 0.05\nrecord_every = 5\n\
             [output]\ndir = {}\n",
            cfg_dir.display()
        ),
    );
    let status = inls()
        .args(["evolve", "--config"])
        .arg(&cfg)
        .env("INLS_OUT_DIR", &env_dir)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(env_dir.exists() && !cfg_dir.exists());

    let status = inls()
        .args(["evolve", "--config"])
        .arg(&cfg)
        .env("INLS_OUT_DIR", &env_dir)
        .arg("--out")
        .arg(&flag_dir)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(flag_dir.exists());
}

#[test]
fn sweep_prints_phase_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "[initial]\nprofile = gaussian\namplitude = 0.2\n\
         [grid]\nr_max = 30.0\nn = 255\n\
         [controls]\ndt0 = 1e-2\nt_end = 0.05\nrecord_every = 5\n\
         [sweep]\namplitudes = 0.1, 0.2\n",
    );
    let out = inls()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("results"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# config_hash = "), "{text}");
    assert!(
        text.contains("amplitude,sigma,lambda,energy_phi,kinetic_phi,region,verdict"),
        "{text}"
    );
    assert_eq!(text.lines().count(), 4, "{text}");
}

#[test]
fn invalid_config_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[params]\nbogus = 1\n");
    let out = inls()
        .args(["ground-state", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key"));
}
