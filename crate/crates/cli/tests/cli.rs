use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn droplet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_droplet"))
        .args(args)
        .output()
        .expect("spawn droplet")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("case.cfg");
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL: &str = r#"
M = 16
L = 32
dt = 0.01
T = 0.1
output_every = 2
output_dir = "out"
snapshot_times = [0.0, 0.05, 0.1]
"#;

#[test]
fn run_writes_every_listed_output() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = droplet(&["run", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let dir = tmp.path().join("out");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["termination"], "completed");
    assert_eq!(manifest["scheme"], "upwind");
    let outputs = manifest["outputs"].as_array().unwrap();
    assert!(outputs.len() >= 8);
    for f in outputs {
        assert!(dir.join(f.as_str().unwrap()).is_file(), "{f}");
    }

    let diag = fs::read_to_string(dir.join("diagnostics.csv")).unwrap();
    let lines: Vec<&str> = diag.lines().collect();
    assert_eq!(lines[0], "t,gap_abs,e1,e2,vol_rel,min_r,e2_sum");
    assert_eq!(lines.len(), 1 + 6);
    assert!(!diag.contains('\r'));
    let profile = fs::read_to_string(dir.join("profile_t0.05.csv")).unwrap();
    assert_eq!(profile.lines().count(), 1 + 17);
    let section = fs::read_to_string(dir.join("section_t0.10.csv")).unwrap();
    assert_eq!(section.lines().count(), 1 + 32);
    assert!(fs::read_to_string(dir.join("sections.gp")).unwrap().contains("section_t0.10.csv"));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for dir in [&a, &b] {
        let out = droplet(&["run", "--config", &cfg, "--scheme", "fv", "--output-dir", dir.to_str().unwrap()]);
        assert!(out.status.success());
    }
    for f in ["diagnostics.csv", "profile_t0.10.csv", "section_t0.05.csv", "profile_final.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn overrides_take_precedence() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = droplet(&[
        "run", "--config", &cfg, "--M", "12", "--L", "16", "--T", "0.04",
        "--center-law", "exact", "--scheme", "lf", "--output-every", "1", "--parallel",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("out");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["m"], 12);
    assert_eq!(manifest["scheme"], "lf");
    assert_eq!(manifest["center_law"], "exact");
    let diag = fs::read_to_string(dir.join("diagnostics.csv")).unwrap();
    assert_eq!(diag.lines().count(), 1 + 5);
}

#[test]
fn configuration_errors_exit_with_2() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("nope.cfg");
    let out = droplet(&["run", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = write_config(tmp.path(), "scheme = \"rk4\"\n");
    assert_eq!(droplet(&["run", "--config", &cfg]).status.code(), Some(2));

    let cfg = write_config(tmp.path(), SMALL);
    assert_eq!(droplet(&["run", "--config", &cfg, "--M", "2"]).status.code(), Some(2));
    assert_eq!(droplet(&["tables", "--config", &cfg, "--center-law", "sideways"]).status.code(), Some(2));
}

#[test]
fn negative_radius_exits_with_4() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "M = 20\nL = 40\nT = 2.0\ncenter_law = \"scaled:17/2\"\noutput_dir = \"out\"\nallow_cfl_violation = true\n",
    );
    let out = droplet(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(4));
    let dir = tmp.path().join("out");
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["termination"], "negative-radius");
    let t = manifest["termination_time"].as_f64().unwrap();
    assert!(t > 0.3 && t < 0.7, "{t}");
    let diag = fs::read_to_string(dir.join("diagnostics.csv")).unwrap();
    let last = diag.lines().last().unwrap();
    assert!(last.contains(",-"), "{last}");
}

#[test]
fn refused_cfl_violation_exits_with_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "T = 1.0\ncenter_law = \"scaled\"\nlambda = \"17/2\"\noutput_dir = \"out\"\nsnapshot_times = [0.0]\n",
    );
    let out = droplet(&["run", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    let manifest = fs::read_to_string(tmp.path().join("out/manifest.json")).unwrap();
    assert!(manifest.contains("\"cfl-violation\""));
    assert!(tmp.path().join("out/profile_t0.00.csv").is_file());
}

#[test]
fn tables_print_the_sample_times() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL);
    let out = droplet(&["tables", "--config", &cfg, "--T", "5.0", "--M", "8", "--L", "8", "--dt", "0.05"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,gap_abs,e1,e2,vol_rel");
    assert_eq!(lines.len(), 1 + 3);
    assert!(lines[2].starts_with("2.50000000000e0,"));
    assert_eq!(fs::read_to_string(tmp.path().join("out/table.csv")).unwrap(), text);
}

#[test]
fn selfcheck_passes_at_moderate_resolution() {
    let out = droplet(&["selfcheck", "--M", "40", "--L", "80"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("I2"));
    assert!(text.contains("Hadamard tangency residual"));
    assert!(!text.contains("FAIL"));
}
