use std::collections::BTreeMap;
use std::process::Command;

use proptest::prelude::*;
use talbot::config::ExperimentConfig;

fn talbot(args: &[&str], out: &std::path::Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_talbot"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("TALBOT_THREADS", "1")
        .output()
        .expect("binary runs")
}

#[test]
fn bounds_prints_exact_fractions() {
    let dir = tempfile::tempdir().unwrap();
    let o = talbot(&["bounds", "--theorem", "oblique", "--d", "2"], dir.path());
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("[7/4, 19/10]"));
    let o = talbot(&["bounds", "--theorem", "t32", "--r", "3"], dir.path());
    assert!(String::from_utf8_lossy(&o.stdout).contains("5/8"));
}

#[test]
fn quantize_revival_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = talbot(&["quantize", "--rel", "poly:-1,0,0", "--data", "step:0,pi", "--a", "1", "--q", "1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    for f in ["quantize_coefficients.csv", "quantize_function.csv", "quantize.json", "manifest.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
}

#[test]
fn threshold_failure_exits_one_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let o = talbot(
        &["sweep", "--slice", "horiz:0", "--scales", "64,128,256,512", "--threshold", "slope_max=0.9"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(dir.path().join("sweep.csv").exists());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(json["summary"]["slope"], 1.0);
    assert_eq!(json["summary"]["degenerate"], true);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(talbot(&["dimension", "--slice", "diag:1"], dir.path()).status.code(), Some(2));
    assert_eq!(talbot(&["bounds", "--theorem", "nonsense"], dir.path()).status.code(), Some(2));
    assert_eq!(talbot(&["quantize", "--a", "1", "--q", "0"], dir.path()).status.code(), Some(2));
    assert_eq!(talbot(&["sweep", "--scales", "64,128,256"], dir.path()).status.code(), Some(2));
}

#[test]
fn csv_output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["sweep", "--slice", "obliq:rand:3:1/1", "--scales", "64,128,256,512", "--seed", "3"];
    assert!(talbot(&args, a.path()).status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_talbot"))
        .args(args)
        .arg("--out")
        .arg(b.path())
        .env("TALBOT_THREADS", "4")
        .output()
        .unwrap();
    assert!(o.status.success());
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("sweep.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn config_file_drives_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        relation: "poly:1,0,0,0".into(),
        slice: "horiz:kl:sqrt2".into(),
        scales: vec![8, 16, 32],
        ..ExperimentConfig::default()
    };
    let path = dir.path().join("run.toml");
    std::fs::write(&path, cfg.to_toml()).unwrap();
    let o = talbot(&["--config", path.to_str().unwrap(), "l4count"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["relation"], "poly:1,0,0,0");
}

proptest! {
    #[test]
    fn config_round_trips(
        scales in proptest::collection::vec(1u64..1 << 40, 0..6),
        grid in proptest::option::of(1usize..1 << 30),
        seed in any::<u64>(),
        limits in proptest::collection::btree_map("[a-z_]{1,12}", any::<f64>().prop_filter("finite", |x| x.is_finite()), 0..4),
    ) {
        let cfg = ExperimentConfig {
            scales,
            grid,
            seed: seed >> 1,
            thresholds: limits.into_iter().collect::<BTreeMap<_, _>>(),
            ..ExperimentConfig::default()
        };
        prop_assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
    }
}
