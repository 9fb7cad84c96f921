//! End-to-end tests of the `gridwave` binary: exit codes, artifact layout,
//! and byte-level determinism.

use gridwave_cli::pipeline::prepare;
use gridwave_cli::scenario;
use gridwave_core::grid::isdft;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gridwave"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

const SMALL_SCENARIO: &str = "\
scenario_id = mini-split
h = 2pi/64
M = 512
gamma = h^(-1/4)
eta0 = 2pi/3
bigrid.k = 1
bigrid.projection = restrict
time.T = 0.1
time.n_samples = 9
outputs = timeseries, snapshots, prediction, comparison
";

#[test]
fn presets_are_listed() {
    let out = run(&["presets"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in scenario::preset_names() {
        assert!(text.contains(name), "missing preset {name} in: {text}");
    }
}

#[test]
fn simulate_writes_expected_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("mini.cfg");
    std::fs::write(&config, SMALL_SCENARIO).unwrap();
    let out_dir = dir.path().join("out");

    let out = run(&[
        "simulate",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let scenario_dir = out_dir.join("mini-split");
    for file in [
        "datum_physical.csv",
        "datum_spectral.csv",
        "final_physical.csv",
        "final_spectral.csv",
        "timeseries-p00.csv",
        "timeseries-p01.csv",
        "comparison.csv",
        "prediction.json",
        "report.json",
    ] {
        assert!(scenario_dir.join(file).is_file(), "missing {file}");
    }

    // metadata is embedded in every artifact
    let csv = std::fs::read_to_string(scenario_dir.join("timeseries-p00.csv")).unwrap();
    for key in [
        "scenario_id",
        "h",
        "M",
        "gamma",
        "k",
        "projection",
        "sign",
        "version",
    ] {
        assert!(csv.contains(&format!("# {key} = ")), "missing meta {key}");
    }
    let report = std::fs::read_to_string(scenario_dir.join("report.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(json["meta"]["scenario_id"], "mini-split");
    assert!(json["regime"]["gamma_h23"].is_number());
}

fn dir_contents(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    entries
}

#[test]
fn identical_scenarios_produce_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("mini.cfg");
    std::fs::write(&config, SMALL_SCENARIO).unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    assert!(run(&[
        "simulate",
        config.to_str().unwrap(),
        "--out",
        out_a.to_str().unwrap()
    ])
    .status
    .success());
    assert!(run(&[
        "simulate",
        config.to_str().unwrap(),
        "--out",
        out_b.to_str().unwrap()
    ])
    .status
    .success());
    let a = dir_contents(&out_a.join("mini-split"));
    let b = dir_contents(&out_b.join("mini-split"));
    assert_eq!(a.len(), b.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in a.iter().zip(&b) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "artifact {name_a} differs between runs");
    }
}

#[test]
fn invalid_scenario_exits_2_with_aggregated_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.cfg");
    std::fs::write(
        &config,
        "scenario_id = bad\nh = -1\nM = 100\ngamma = 0\neta0 = 0.5\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "simulate",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("violations"), "stderr: {err}");
    assert!(
        err.matches("- ").count() >= 3,
        "want all violations listed: {err}"
    );
    assert!(
        !out_dir.exists(),
        "no partial outputs on validation failure"
    );
}

#[test]
fn degenerate_bigrid_level_is_rejected_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("deg.cfg");
    std::fs::write(
        &config,
        "scenario_id = deg\nh = 0.5\nM = 16\ngamma = 2.5\neta0 = pi/2\n\
         bigrid.k = 3\nbigrid.projection = restrict\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "simulate",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out_dir.exists());
}

#[test]
fn unknown_preset_exits_2() {
    let out = run(&["predict", "preset:nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_strict_passes_and_breaches() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.cfg");
    std::fs::write(&good, SMALL_SCENARIO).unwrap();
    let out = run(&[
        "compare",
        good.to_str().unwrap(),
        "--strict",
        "--out",
        dir.path().join("g").to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    // an absurd velocity tolerance must trip the strict gate
    let tight = format!("{SMALL_SCENARIO}compare.tol_velocity = 1e-9\n");
    let bad = dir.path().join("tight.cfg");
    std::fs::write(&bad, tight).unwrap();
    let out = run(&[
        "compare",
        bad.to_str().unwrap(),
        "--strict",
        "--out",
        dir.path().join("t").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sweep_validates_ordering_and_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.cfg");
    std::fs::write(
        &config,
        "scenario_id = sw\nh = 2pi/32\nM = 256\ngamma = h^(-1/4)\neta0 = pi/2\n\
         time.T = 0.5\ntime.n_samples = 16\noutputs = norms\n",
    )
    .unwrap();

    let out = run(&[
        "sweep",
        config.to_str().unwrap(),
        "--h-list",
        "2pi/64,2pi/32", // ascending: rejected
        "--out",
        dir.path().join("o1").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out_dir = dir.path().join("o2");
    let out = run(&[
        "sweep",
        config.to_str().unwrap(),
        "--h-list",
        "2pi/32,2pi/64,2pi/128",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let sweep: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("sw-sweep").join("sweep.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(sweep["entries"].as_array().unwrap().len(), 3);
    assert_eq!(sweep["strichartz_growth"].as_array().unwrap().len(), 2);
}

#[test]
fn norms_output_embeds_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("norms.cfg");
    std::fs::write(
        &config,
        "scenario_id = nrm\nh = 2pi/32\nM = 256\ngamma = h^(-1/4)\neta0 = pi/2\n\
         time.T = 0.5\ntime.n_samples = 16\noutputs = norms\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "norms",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(out_dir.join("nrm").join("norms.json")).unwrap(),
    )
    .unwrap();
    for key in [
        "scenario_id",
        "h",
        "M",
        "gamma",
        "k",
        "projection",
        "sign",
        "version",
    ] {
        assert!(json["meta"][key].is_string(), "missing meta {key}");
    }
    assert_eq!(json["strichartz"]["p"], 6.0);
    assert_eq!(json["strichartz"]["q"], 6.0);
    // p = 2 companion of the smoothing report serializes q = inf as a string
    assert_eq!(json["smoothing"]["q"], "inf");
    assert!(json["smoothing"]["smoothing_value"].is_number());
    assert_eq!(json["smoothing"]["radii"].as_array().unwrap().len(), 3);
}

#[test]
fn json_config_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("mini.json");
    std::fs::write(
        &config,
        r#"{
            "scenario_id": "json-mini",
            "h": "2pi/64",
            "M": 512,
            "gamma": "h^(-1/4)",
            "eta0": "pi/2",
            "bigrid": {"k": 1, "projection": "restrict"},
            "time": {"T": 0.05, "n_samples": 5},
            "outputs": ["prediction"]
        }"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = run(&[
        "predict",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(out_dir.join("json-mini").join("prediction.json").is_file());
}

#[test]
fn edge_datum_filters_identically_at_both_ratios() {
    // The ratio-1/2 and ratio-1/4 restriction filters of the edge datum
    // produce the same smooth packet up to the weight-shape difference
    // b_1 - b_2 ~ delta^2 over the pick, i.e. an l2 distance of order
    // gamma*h^2 (plot-level coincidence, not machine precision).
    let scenarios = scenario::preset("fig3-c").unwrap();
    let k1 = prepare(&scenarios[1]).unwrap();
    let k2 = prepare(&scenarios[2]).unwrap();
    assert_eq!(k1.scenario.k, 1);
    assert_eq!(k2.scenario.k, 2);
    let a = isdft(&k1.datum);
    let b = isdft(&k2.datum);
    let mut diff_sq = 0.0;
    for (x, y) in a.values().iter().zip(b.values()) {
        diff_sq += (x - y).norm_sqr();
    }
    let rel = (k1.grid.h() * diff_sq).sqrt() / a.norm_l2();
    let bound = 2.0 * k1.gamma * k1.grid.h() * k1.grid.h();
    assert!(
        rel <= bound && rel <= 5e-3,
        "filtered edge data differ by {rel:.3e}, bound {bound:.3e}"
    );
}
