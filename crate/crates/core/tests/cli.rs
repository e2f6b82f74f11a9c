use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use twapert::cli::{run_config, Experiment, ExperimentConfig};
use twapert::Error;

fn repo_configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twapert"))
}

fn write_config(dir: &Path, name: &str, json: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p
}

/// First data row of `file` as a column name → value map.
fn first_row(file: &Path) -> BTreeMap<String, f64> {
    let mut r = csv::Reader::from_path(file).unwrap();
    let headers = r.headers().unwrap().clone();
    let row = r.records().next().unwrap().unwrap();
    headers.iter().zip(row.iter()).map(|(h, v)| (h.to_string(), v.parse().unwrap())).collect()
}

#[test]
fn shipped_configs_parse_and_validate() {
    let mut seen = 0;
    for entry in std::fs::read_dir(repo_configs()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let cfg = ExperimentConfig::load(&path).unwrap();
            cfg.validate().unwrap();
            cfg.system().unwrap();
            seen += 1;
        }
    }
    assert!(seen >= 5);
}

#[test]
fn config_defaults_and_rejections() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(dir.path(), "a.json", r#"{"experiment": "weak-coupling"}"#);
    let cfg = ExperimentConfig::load(&p).unwrap();
    assert_eq!(cfg, ExperimentConfig::new(Experiment::WeakCoupling));
    assert_eq!(cfg.t_max(), 1000.0);
    assert_eq!(cfg.orders(), vec![2]);

    let p = write_config(dir.path(), "b.json", r#"{"experiment": "kernels", "t_maxx": 3}"#);
    let err = ExperimentConfig::load(&p).unwrap_err();
    assert!(matches!(err, Error::Json(_)) && err.exit_code() == 2);
    assert!(ExperimentConfig::load(&dir.path().join("missing.json")).is_err());

    let bad = |f: &dyn Fn(&mut ExperimentConfig)| {
        let mut c = ExperimentConfig::new(Experiment::QubitDecoherence);
        f(&mut c);
        c.validate().unwrap_err().exit_code()
    };
    assert_eq!(bad(&|c| c.t_max = Some(-1.0)), 2);
    assert_eq!(bad(&|c| c.grid_points = Some(1)), 2);
    assert_eq!(bad(&|c| c.orders = Some(vec![4])), 2);
    assert_eq!(bad(&|c| c.orders = Some(vec![])), 2);
    assert_eq!(bad(&|c| c.entropy_stride = 0), 2);
    assert_eq!(bad(&|c| c.model = Some("nope.json".into())), 2);
    let mut c = ExperimentConfig::new(Experiment::SingleMode);
    c.orders = Some(vec![3]);
    assert!(c.validate().is_err());
}

#[test]
fn error_exit_codes() {
    assert_eq!(Error::Validation("x".into()).exit_code(), 2);
    assert_eq!(Error::Domain("x".into()).exit_code(), 2);
    assert_eq!(Error::Numerical("x".into()).exit_code(), 3);
}

#[test]
fn binary_reports_validation_failures_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(dir.path(), "c.json", r#"{"experiment": "kernels", "t_max": -5}"#);
    let out = binary().args(["kernels", "--config"]).arg(&p).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Experiment named on the command line differs from the config.
    let p = write_config(dir.path(), "d.json", r#"{"experiment": "kernels"}"#);
    let out = binary().args(["single-mode", "--config"]).arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kernels"));

    // The dense oracle refuses a continuous bath.
    let p = write_config(dir.path(), "e.json", r#"{"experiment": "qubit-decoherence", "t_max": 20, "grid_points": 5}"#);
    let out = binary()
        .args(["qubit-decoherence", "--oracle", "--orders", "0", "--config"])
        .arg(&p)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_reports_numerical_guard_with_code_3() {
    // Strong tunneling drives the second-order mode density matrix negative.
    let dir = tempfile::tempdir().unwrap();
    let model = std::fs::read_to_string(repo_configs().join("models/qubit.json"))
        .unwrap()
        .replace("[[0, 10], [10, 0]]", "[[0, 1000], [1000, 0]]");
    write_config(dir.path(), "strong.json", &model);
    let p = write_config(
        dir.path(),
        "f.json",
        r#"{"experiment": "qubit-decoherence", "model": "strong.json", "t_max": 50, "grid_points": 11,
            "orders": [2], "probe_frequencies": [25.0], "entropy_stride": 5}"#,
    );
    let out = binary().args(["qubit-decoherence", "--config"]).arg(&p).arg("--out").arg(dir.path().join("o")).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn reruns_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(Experiment::SingleMode);
    cfg.t_max = Some(60.0);
    cfg.grid_points = Some(31);
    cfg.tunnelings = vec![10.0];
    cfg.oracle = true;
    cfg.fock = Some(vec![8]);
    cfg.discretization.modes = 1;
    let mut files = Vec::new();
    for run in ["a", "b"] {
        cfg.output_dir = Some(dir.path().join(run));
        files.push(run_config(&cfg, BTreeMap::new()).unwrap().files);
    }
    assert_eq!(files[0], files[1]);
    for f in &files[0] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        if f == "manifest.json" {
            // Only the output directory differs.
            let s = |v: Vec<u8>| String::from_utf8(v).unwrap().replace("/a\"", "/X\"").replace("/b\"", "/X\"");
            assert_eq!(s(a), s(b));
        } else {
            assert_eq!(a, b, "{f}");
        }
    }
    let row = first_row(&dir.path().join("a/single_mode_delta10.csv"));
    assert_eq!(row["local_pop1_total"], 1.0);
    assert_eq!(row["oracle_pop1"], 1.0);
}

#[test]
fn qubit_run_writes_expected_tables_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_config(
        dir.path(),
        "q.json",
        r#"{"experiment": "qubit-decoherence", "t_max": 40, "orders": [2], "probe_frequencies": [50.0], "entropy_stride": 10}"#,
    );
    let out_dir = dir.path().join("out");
    let out = binary()
        .args(["qubit-decoherence", "--grid", "21", "--orders", "1,2", "--dump-pathways", "--config"])
        .arg(&p)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for order in [1, 2] {
        let row = first_row(&out_dir.join(format!("series_order{order}.csv")));
        assert_eq!(row["t_fs"], 0.0);
        assert!((row["sigma_x_total"] - 1.0).abs() < 1e-12);
        assert!((row["purity_total"] - 1.0).abs() < 1e-12);
        assert!(out_dir.join(format!("purity_order{order}.svg")).is_file());
    }
    assert!(std::fs::read_to_string(out_dir.join("pathways.txt")).unwrap().lines().count() > 0);

    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["experiment"], "qubit-decoherence");
    assert_eq!(manifest["config"]["grid_points"], 21);
    assert_eq!(manifest["overrides"]["grid_points"], "21");
    assert_eq!(manifest["overrides"]["orders"], "[1, 2]");
    assert_eq!(manifest["constants"]["hbar_cm_fs"], 5308.837);
    assert_eq!(manifest["constants"]["kb_cm_per_K"], 0.695035);
    let listed: Vec<&str> = manifest["files"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    for f in &listed {
        assert!(out_dir.join(f).is_file(), "{f}");
    }
    assert!(listed.contains(&"entropy.csv"));
}

#[test]
fn kernels_and_suppression_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(Experiment::Kernels);
    cfg.t_max = Some(20.0);
    cfg.grid_points = Some(11);
    cfg.output_dir = Some(dir.path().join("k"));
    let art = run_config(&cfg, BTreeMap::new()).unwrap();
    assert!(art.files.iter().any(|f| f.starts_with("kernel_")));
    let row = first_row(&dir.path().join("k").join(art.files.iter().find(|f| f.ends_with(".csv")).unwrap()));
    assert_eq!(row["t_fs"], 0.0);

    let mut cfg = ExperimentConfig::new(Experiment::SuppressionScan);
    cfg.t_max = Some(20.0);
    cfg.grid_points = Some(11);
    cfg.output_dir = Some(dir.path().join("s"));
    let art = run_config(&cfg, BTreeMap::new()).unwrap();
    let manifest = std::fs::read_to_string(dir.path().join("s/manifest.json")).unwrap();
    assert!(art.files.contains(&"suppression.csv".to_string()));
    assert!(manifest.contains("173.205"));
}
