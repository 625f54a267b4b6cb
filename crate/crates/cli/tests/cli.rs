use std::process::{Command, Output};

fn pfrac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfrac")).args(args).env_remove("RUST_LOG").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lists_the_catalog() {
    let out = stdout(&pfrac(&["scenario", "list"]));
    for name in ["two-periodic", "markov-arcsine", "gap-lebesgue", "two-turning-points"] {
        assert!(out.contains(name), "{name} missing");
    }
    assert!(out.lines().count() >= 7);
}

#[test]
fn two_periodic_moments() {
    let out = stdout(&pfrac(&["moments", "--scenario", "two-periodic", "--count", "6"]));
    let vals: Vec<&str> = out.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(vals, ["1", "1", "2", "3", "6", "11"]);
}

#[test]
fn scenario_export_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    stdout(&pfrac(&["scenario", "run", "markov-arcsine", "--depth", "5", "--out", d, "--format", "csv"]));
    let csv = std::fs::read_to_string(dir.path().join("markov-arcsine.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("depth,n_j,lambda_re"));
    assert_eq!(lines.count(), 5 * 3);

    stdout(&pfrac(&["scenario", "run", "atom-pair", "--out", d, "--format", "json"]));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("atom-pair.json")).unwrap()).unwrap();
    assert_eq!(json["scenario"], "atom-pair");
    assert_eq!(json["exact"], true);
    assert!(!dir.path().join(".atom-pair.json.tmp").exists());
}

#[test]
fn config_file_and_grid_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("gap.toml");
    std::fs::write(
        &cfg,
        "[measure]\ndensity = \"lebesgue\"\nintervals = [[\"-1\", \"-1/2\"], [\"1/2\", \"1\"]]\nnormalize = true\nt_weight = true\n\n[run]\nname = \"cfg-gap\"\ndepth = 4\n",
    )
    .unwrap();
    let grid = dir.path().join("grid.txt");
    std::fs::write(&grid, "0.1 # inside the gap\n0,1\n").unwrap();
    let out = stdout(&pfrac(&["converge", "--config", cfg.to_str().unwrap(), "--grid", grid.to_str().unwrap()]));
    // Only j = 3 is admissible for the definitizable kind at depth 4: odd-degree
    // denominators vanish at 0 for a symmetric measure.
    assert_eq!(out.lines().count(), 1 + 2);
    assert!(out.lines().nth(1).unwrap().starts_with("3,2,"));
}

#[test]
fn gap_verdicts() {
    let sym = stdout(&pfrac(&["gap", "--alpha=-1/3", "--beta", "1/3"]));
    assert!(sym.contains("verdict\tInconclusive"));
    assert!(sym.contains("omega(inf)\t5.000000000"));
    let json = stdout(&pfrac(&["gap", "--scenario", "gap-lebesgue", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(v["omega_inf"]["float"].as_str().unwrap().starts_with("5."));
}

#[test]
fn pade_kinds_come_from_the_registry() {
    let out = stdout(&pfrac(&["pade", "--scenario", "two-periodic", "--kind", "subdiagonal", "--depth", "5"]));
    assert!(out.contains("j=1 n=1"));
    let bad = pfrac(&["pade", "--scenario", "two-periodic", "--kind", "nope"]);
    assert!(!bad.status.success());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown approximant `nope`"));
}

#[test]
fn reports_config_errors_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[measure]\ndensity = \"arcsine\"\nnormalise = true\n").unwrap();
    let o = pfrac(&["moments", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn notes_cannot_be_computed() {
    let o = pfrac(&["pfraction", "--scenario", "two-turning-points"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("note only"));
}
