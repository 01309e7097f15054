use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str], config: &Path, out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hausdorff"));
    cmd.args(args).arg("--config").arg(config);
    if let Some(out) = out {
        cmd.arg("--out").arg(out);
    }
    cmd.output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn apply_writes_metadata_and_rows() {
    let out = run(&["apply"], &configs().join("apply_atom.json"), None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["# tool: hausdorff", "# command: apply", "# config_sha256: ", "# quadrature_level: 1"] {
        assert!(text.contains(key), "missing {key} in\n{text}");
    }
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "index,re,im");
    // The single atom at the origin maps z to -z.
    assert!(rows[2].starts_with("1,-1e0,"), "{}", rows[2]);
}

#[test]
fn norms_of_z_squared() {
    let out = run(&["norms"], &configs().join("norms_z2.json"), None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let value = |label: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(label)).unwrap();
        line.rsplit(',').nth(1).unwrap().parse().unwrap()
    };
    assert!((value("bloch") - 4.0 / (3.0 * 3f64.sqrt())).abs() < 1e-4);
    assert!((value("hardy") - 1.0).abs() < 1e-12);
    assert!((value("\"bergman") - (1.0f64 / 3.0).sqrt()).abs() < 1e-8);
}

#[test]
fn bounds_json_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bounds.json");
    let status = run(&["bounds"], &configs().join("bounds_hardy_atom.json"), Some(&out)).status;
    assert_eq!(status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 3);
    for r in reports {
        assert!((r["theoretical"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-10);
        assert_eq!(r["pass"], true);
    }
    assert_eq!(doc["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        assert!(run(&["coeffs"], &configs().join("coeffs_area.json"), Some(out)).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn seed_override_changes_hash() {
    let cfg = configs().join("bounds_hardy_atom.json");
    let hash = |seed: &str| {
        let out = run(&["bounds", "--seed", seed], &cfg, None);
        let text = String::from_utf8(out.stdout).unwrap();
        text.lines().find(|l| l.starts_with("# config_sha256")).unwrap().to_string()
    };
    assert_ne!(hash("1"), hash("2"));
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.json", r#"{"measure": {"discrete": {"atoms": [], "weights": []}}, "function": {"monomial": 1}}"#);
    let unknown = write(dir.path(), "unknown.json", r#"{"funtion": {"monomial": 1}}"#);
    let boundary = write(dir.path(), "boundary.json", r#"{"measure": {"discrete": {"atoms": [[1, 0]], "weights": [1]}}, "function": {"monomial": 1}}"#);
    for cfg in [&empty, &unknown, &boundary, &dir.path().join("missing.json")] {
        let out = run(&["apply"], cfg, None);
        assert_eq!(out.status.code(), Some(2), "{}", cfg.display());
        assert!(!out.stderr.is_empty());
    }
    let no_config = Command::new(env!("CARGO_BIN_EXE_hausdorff")).arg("apply").output().unwrap();
    assert_eq!(no_config.status.code(), Some(2));
}

#[test]
fn divergent_bound_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "divergent.json",
        r#"{"kernel": {"radial_power": -3}, "measure": {"area": {"alpha": 0}}, "space": "bloch", "trials": 5}"#,
    );
    assert_eq!(run(&["bounds"], &cfg, None).status.code(), Some(3));
}

#[test]
fn failing_check_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "strict.json",
        r#"{"epsilons": [0.3, 0.1],
            "suite": {"mobius_pairs": 10, "composition_pairs": 2, "invariance_pairs": 5, "inequality_pairs": 2,
                      "bound_trials": 5, "bound_cases": [],
                      "tolerances": {"bloch_invariance": 1e-15, "identity": 1.0}}}"#,
    );
    let out = run(&["verify"], &cfg, None);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("bloch_mobius_invariance,") && l.ends_with(",false")));
}
