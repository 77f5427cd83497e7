use std::path::Path;
use std::process::Command;

use proptest::prelude::*;
use serde_json::Value;
use tentlab_cli::{execute, run_command, RunManifest, MANIFEST_FILE};

fn run_in(dir: &Path, argv: &[&str]) -> tentlab_cli::RunOutcome {
    let mut args: Vec<String> = argv.iter().map(|s| s.to_string()).collect();
    args.push("--out".into());
    args.push(dir.display().to_string());
    execute(&args).unwrap_or_else(|e| panic!("{argv:?} failed: {e:?}"))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn cycles_rational_two_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_in(
        dir.path(),
        &[
            "cycles",
            "--h",
            "1.5",
            "--period",
            "2",
            "--backend",
            "rational",
        ],
    );
    let cycles = read_json(&dir.path().join("cycles.json"));
    assert_eq!(cycles[0]["points"], serde_json::json!(["6/13", "9/13"]));
    assert_eq!(cycles.as_array().unwrap().len(), 1);
    assert!(outcome.stdout.contains("\"6/13\""));
}

#[test]
fn stabilize_lands_on_upper_cycle_point() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["stabilize", "--x0", "0.3", "--steps", "50"]);
    let summary = read_json(&dir.path().join("stabilize.json"));
    assert_eq!(summary["classified_target"], "cycle_high");
    let last: f64 = summary["final_value"].as_str().unwrap().parse().unwrap();
    assert!((last - 9.0 / 13.0).abs() < 1e-3);
    let csv = std::fs::read_to_string(dir.path().join("stabilize.csv")).unwrap();
    assert!(csv.starts_with("n,x_star\n"));
    assert_eq!(csv.lines().count(), 52);
}

#[test]
fn zero_step_simulation() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["simulate", "--x0", "0.5", "--steps", "0"]);
    let csv = std::fs::read_to_string(dir.path().join("orbit.csv")).unwrap();
    assert_eq!(csv, "n,x\n0,0.5\n");
}

#[test]
fn bare_decimal_and_fraction_agree_under_rational() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_in(
        a.path(),
        &[
            "simulate",
            "--h",
            "1.5",
            "--x0",
            "0.3",
            "--backend",
            "rational",
            "--steps",
            "8",
            "--k",
            "1",
        ],
    );
    run_in(
        b.path(),
        &[
            "simulate",
            "--h",
            "3/2",
            "--x0",
            "3/10",
            "--backend",
            "rational",
            "--steps",
            "8",
            "--k",
            "1",
        ],
    );
    let x = std::fs::read(a.path().join("orbit.csv")).unwrap();
    assert_eq!(x, std::fs::read(b.path().join("orbit.csv")).unwrap());
    assert!(String::from_utf8(x).unwrap().contains("\n1,9/20\n"));
}

#[test]
fn manifest_lists_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = run_in(dir.path(), &["fib", "--phase", "--plot"]);
    let mut on_disk: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    on_disk.sort();
    let mut listed = outcome.manifest.artifacts.clone();
    listed.sort();
    assert_eq!(on_disk, listed);
    let manifest = RunManifest::read(&dir.path().join(MANIFEST_FILE)).unwrap();
    assert_eq!(manifest.schema, 1);
    assert_eq!(manifest.command, "fib");
    assert_eq!(manifest.parameters["phase"], "true");
}

#[test]
fn fib_reports_prediction_and_observation() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["fib", "--phase"]);
    let summary = read_json(&dir.path().join("fib.json"));
    assert_eq!(summary["predicted_escape"], 60);
    assert_eq!(summary["observed_escape"], 60);
    let slope: f64 = summary["manifold_slopes"]["stable"]
        .as_str()
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope + 0.618033988749895).abs() < 1e-12);
}

#[test]
fn spectrum_classifies_equilibria() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["spectrum", "--backend", "rational"]);
    let summary = read_json(&dir.path().join("spectrum.json"));
    let stable: Vec<(String, bool)> = summary["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["point"].as_str().unwrap().to_string(),
                e["stable"].as_bool().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        stable,
        [
            ("6/13".to_string(), true),
            ("3/5".to_string(), false),
            ("9/13".to_string(), true)
        ]
    );
}

#[test]
fn escape_from_four_tenths() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["escape"]);
    let summary = read_json(&dir.path().join("escape.json"));
    let index = summary["escape"]["escape_index"].as_u64().unwrap();
    assert!((60..=300).contains(&index));
    run_in(
        dir.path(),
        &["escape", "--backend", "rational", "--steps", "100"],
    );
    assert!(read_json(&dir.path().join("escape.json"))["escape"].is_null());
}

#[test]
fn plots_are_identical_across_directories() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [a.path(), b.path()] {
        run_in(dir, &["series", "--plot"]);
        run_in(dir, &["sweep", "--net", "uniform:200", "--plot"]);
    }
    for name in ["series.csv", "series.svg", "sweep.csv", "sweep.svg"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        assert_eq!(x, std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
    let series = std::fs::read_to_string(a.path().join("series.csv")).unwrap();
    assert_eq!(series.lines().count(), 302);
}

#[test]
fn replay_reproduces_csv_bytes() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_in(
        a.path(),
        &[
            "sweep",
            "--net",
            "triadic:3",
            "--sigma",
            "1.25",
            "--steps",
            "40",
            "--tol",
            "0.01",
        ],
    );
    let manifest = a.path().join(MANIFEST_FILE);
    run_in(b.path(), &["replay", manifest.to_str().unwrap()]);
    for name in ["sweep.csv", "sweep.json"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap()
        );
    }
    let replayed = RunManifest::read(&b.path().join(MANIFEST_FILE)).unwrap();
    assert_eq!(
        replayed.parameters,
        RunManifest::read(&manifest).unwrap().parameters
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(run_command(["bogus"]), 2);
    assert_eq!(run_command(["simulate", "--nope", "1"]), 2);
    assert_eq!(run_command(["simulate", "--h", "2.5", "--out", out]), 2);
    assert_eq!(run_command(["simulate", "--x0", "1.5", "--out", out]), 2);
    assert_eq!(run_command(["simulate", "--x0", "1/0", "--out", out]), 2);
    assert_eq!(
        run_command(["stabilize", "--sigma", "0.5", "--out", out]),
        2
    );
    assert_eq!(run_command(["sweep", "--net", "grid:5", "--out", out]), 2);
    assert_eq!(run_command(["cycles", "--period", "21", "--out", out]), 2);
    assert_eq!(
        run_command([
            "simulate",
            "--backend",
            "decimal",
            "--precision",
            "3",
            "--out",
            out
        ]),
        2
    );
    assert_eq!(run_command(["--help"]), 0);
    assert_eq!(run_command(["simulate", "--steps", "3", "--out", out]), 0);
    let missing = dir.path().join("missing.json");
    assert_eq!(run_command(["replay", missing.to_str().unwrap()]), 1);
}

#[test]
fn binary_reports_usage_on_stderr() {
    let output = Command::new(env!("CARGO_BIN_EXE_tentlab"))
        .arg("bogus")
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("Usage"));
    assert!(output.stdout.is_empty());
}

#[test]
fn thread_cap_is_read_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_tentlab"))
            .args(["sweep", "--net", "uniform:300", "--out"])
            .arg(dir.path())
            .env("TENTLAB_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("lots").status.code(), Some(2));
    assert_eq!(run("1").status.code(), Some(0));
    let single = std::fs::read(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(run("0").status.code(), Some(0));
    assert_eq!(single, std::fs::read(dir.path().join("sweep.csv")).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn replay_round_trip(p in 0u32..=97, steps in 0usize..40, k in 1usize..4, rational in any::<bool>()) {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let x0 = format!("{p}/97");
        let steps = steps.to_string();
        let k = k.to_string();
        let backend = if rational { "rational" } else { "binary64" };
        run_in(a.path(), &["simulate", "--x0", &x0, "--steps", &steps, "--k", &k, "--backend", backend]);
        let manifest = a.path().join(MANIFEST_FILE);
        run_in(b.path(), &["replay", manifest.to_str().unwrap()]);
        prop_assert_eq!(
            std::fs::read(a.path().join("orbit.csv")).unwrap(),
            std::fs::read(b.path().join("orbit.csv")).unwrap()
        );
    }
}
