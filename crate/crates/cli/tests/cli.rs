use std::path::{Path, PathBuf};

use landcore_cli::{run, EXIT_INVALID, EXIT_IO, EXIT_NO_RESULT, EXIT_OK};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_str().unwrap().to_string()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("landcore").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn help_and_usage_errors() {
    let (code, _, err) = cli(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("query") && err.contains("stratify"));
    let (code, _, err) = cli(&["frobnicate"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("frobnicate"));
    let (code, _, _) = cli(&["ccm", "raster", "--data", &fixture("demo.json"), "--from", "1,1", "--to", "2"]);
    assert_eq!(code, EXIT_INVALID);
}

#[test]
fn unreachable_target_reports_no_path() {
    // (400, 500) is inside the lake
    let args = ["ccm", "raster", "--data", &fixture("demo.json"), "--from", "50,50", "--to", "400,500"];
    let (code, out, err) = cli(&args);
    assert_eq!(code, EXIT_NO_RESULT);
    assert!(out.is_empty());
    assert!(err.contains("no path"));
    let (code, _, err) = cli(&["ccm", "vector", "--data", &fixture("demo.json"), "--from", "50,50", "--to", "400,500"]);
    assert_eq!(code, EXIT_NO_RESULT);
    assert!(err.contains("no path"));
}

#[test]
fn exit_codes_by_failure_kind() {
    let (code, _, err) = cli(&["query", "near-road", "--dist", "5", "--road", "Z9", "--data", &fixture("fig1.json")]);
    assert_eq!(code, EXIT_NO_RESULT);
    assert!(err.contains("Z9"));
    let (code, _, _) = cli(&["query", "area-gt", "--threshold", "1", "--data", "/definitely/missing.json"]);
    assert_eq!(code, EXIT_IO);
    let (code, _, err) = cli(&["query", "area-gt", "--threshold", "-1", "--data", &fixture("fig1.json")]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("threshold"));
    let (code, _, _) = cli(&["ccm", "raster", "--data", &fixture("demo.json"), "--from", "-5,50", "--to", "950,950"]);
    assert_eq!(code, EXIT_INVALID);
    let dir = tempfile::tempdir().unwrap();
    let bad = tmp(&dir, "bad.json");
    std::fs::write(&bad, "{\"schema_version\": \"1\", \"crs\": \"local-meters\", \"towns\": [\n  {\"id\": \"X\", \"geometry\": {\"type\": \"polyline\", \"coordinates\": [[0,0],[1,1]]}}]}").unwrap();
    let (code, _, err) = cli(&["query", "area-gt", "--threshold", "1", "--data", &bad]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("\"X\""), "{err}");
}

#[test]
fn topology_store_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let store = tmp(&dir, "store.json");
    let (code, out, _) = cli(&["topology", "build", "--data", &fixture("demo.json"), "--out", &store]);
    assert_eq!((code, out.as_str()), (EXIT_OK, ""));
    let window = "0,0,1000,1000";
    let (_, from_store, _) = cli(&["topology", "window", "--store", &store, "--window", window]);
    let (_, from_data, _) = cli(&["topology", "window", "--data", &fixture("demo.json"), "--window", window]);
    assert_eq!(from_store, from_data);
    // the island area and its host both come back complete
    assert_eq!(from_store.lines().count(), 6);
    assert!(from_store.lines().skip(1).all(|l| l.contains(",complete,")));
    let (_, bbox, _) = cli(&["topology", "window", "--store", &store, "--window", "0,0,100,100", "--select", "bbox"]);
    assert_eq!(bbox, "area_id,status,area,n_vertices\n1,incomplete,,\n");
}

#[test]
fn converge_table_shape() {
    let (code, out, _) = cli(&[
        "ccm",
        "converge",
        "--data",
        &fixture("demo.json"),
        "--from",
        "50,50",
        "--to",
        "950,950",
        "--cell-sizes",
        "40,20",
        "--connectivities",
        "8",
        "--steiner-counts",
        "1,2",
    ]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "method,resolution_or_m,cost,runtime_ms");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("RASTER-8,40,") && lines[4].starts_with("VECTOR(2),2,"));
}

#[test]
fn vector_path_renders_as_overlay() {
    let dir = tempfile::tempdir().unwrap();
    let (path, svg) = (tmp(&dir, "p.csv"), tmp(&dir, "m.svg"));
    let (code, out, _) = cli(&[
        "ccm",
        "vector",
        "--data",
        &fixture("demo.json"),
        "--config",
        &fixture("demo.toml"),
        "--from",
        "50,50",
        "--to",
        "950,950",
        "--path-out",
        &path,
    ]);
    assert_eq!(code, EXIT_OK);
    let n: usize = out.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    let (code, _, _) = cli(&["render", "--data", &fixture("demo.json"), "--path", &path, "--out", &svg]);
    assert_eq!(code, EXIT_OK);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(landcore::io::svg::path_points(&text).unwrap().len(), n);
    assert!(!text.contains("class=\"stratum"));
    let (code, _, _) =
        cli(&["render", "--data", &fixture("demo.json"), "--strata", "--config", &fixture("demo.toml"), "--out", &svg]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("class=\"stratum ").count(), 25);
}

#[test]
fn seed_changes_plan_and_config_seed_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let plan = |seed: Option<&str>, name: &str| -> String {
        let (out, data, config) = (tmp(&dir, name), fixture("demo.json"), fixture("demo.toml"));
        let mut args = vec!["stratify", "--data", &data, "--config", &config, "--plan-out", &out];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        let (code, _, _) = cli(&args);
        assert_eq!(code, EXIT_OK);
        std::fs::read_to_string(&out).unwrap()
    };
    let configured = plan(None, "a.csv");
    assert_eq!(configured, plan(Some("42"), "b.csv"));
    assert_ne!(configured, plan(Some("43"), "c.csv"));
    assert_eq!(configured.lines().count(), 31);
}

#[test]
fn report_against_fixture_outcomes() {
    let args = [
        "report",
        "--data",
        &fixture("demo.json"),
        "--config",
        &fixture("demo.toml"),
        "--outcomes",
        &fixture("outcomes.csv"),
    ];
    let (code, out, _) = cli(&args);
    assert_eq!(code, EXIT_OK);
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(row[0], 2010.0);
    assert!(row[1] >= 0.0 && row[1] <= 1e6 && row[2] >= 0.0);
    // import need follows from the estimate and the configured demand
    assert!((row[4] - (5000.0 * 0.25 - row[1] * 0.0004).max(0.0)).abs() < 1e-3);
    let dir = tempfile::tempdir().unwrap();
    let partial = tmp(&dir, "partial.csv");
    std::fs::write(&partial, "point_id,crop\n1,1\n").unwrap();
    let mut bad = args.to_vec();
    bad[6] = &partial;
    let (code, _, err) = cli(&bad);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("2"), "{err}");
}

#[test]
fn binary_matches_library() {
    let exe = PathBuf::from(env!("CARGO_BIN_EXE_landcore"));
    let output = std::process::Command::new(exe)
        .args(["query", "near-road", "--dist", "500", "--road", "A12", "--data", &fixture("fig1.json")])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let golden = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/near_road.csv")).unwrap();
    assert_eq!(output.stdout, golden);
}
