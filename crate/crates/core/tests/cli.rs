use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_sharpineq"));
    c.env_remove("SHARPINEQ_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn fixture(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)).unwrap()
}

fn lookup(csv: &str, key: &str) -> String {
    csv.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap_or_else(|| panic!("no row {key}"))
        .to_string()
}

#[test]
fn constants_table_matches_closed_forms() {
    let o = run(&["constants", "--n", "3", "--p", "2", "--alpha", "3", "--avr", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let closed = 3f64.sqrt().recip() * (2.0 / std::f64::consts::PI).powf(2.0 / 3.0);
    for key in ["at", "sobolev", "gn"] {
        let v = lookup(&out, key);
        let significant = v.trim_start_matches(['0', '.']).chars().filter(char::is_ascii_digit).count();
        assert_eq!(significant, 15, "{key}={v}");
        assert!((v.parse::<f64>().unwrap() - closed).abs() < 1e-15);
    }
    assert_eq!(out, fixture("constants_n3_p2.csv"));
}

#[test]
fn faber_krahn_only_constants() {
    let o = run(&["constants", "--n", "2", "--avr", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let fk: f64 = lookup(&stdout(&o), "fk").parse().unwrap();
    let j0 = 2.404825557695773f64;
    assert!((fk - std::f64::consts::PI * j0 * j0).abs() < 1e-12);
    assert!(!stdout(&o).contains("\nat,"));
}

#[test]
fn invalid_parameters_exit_2_naming_the_constraint() {
    let o = run(&["constants", "--n", "3", "--p", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("p < n violated: p=4 >= n=3"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());

    let cases: &[&[&str]] = &[
        &["constants", "--n", "3", "--p", "2", "--avr", "1.5"],
        &["constants", "--n", "3", "--alpha", "2"],
        &["constants", "--n", "3", "--bogus", "1"],
        &["constants", "--n", "2", "--tol", "foo=1"],
        &["constants", "--n", "2", "--tol", "margin=0"],
        &["space", "--variant", "ale", "--n", "3", "--k", "4", "--sweep", "1:100:log"],
        &["space", "--variant", "warped", "--n", "2", "--a", "0.5", "--sweep", "10:1"],
        &["space", "--variant", "cone", "--n", "2", "--m", "100"],
        &["verify", "faber-krahn", "--variant", "ale", "--n", "3", "--k", "2"],
        &["verify", "sobolev", "--variant", "euclidean", "--n", "2"],
        &["sandbox", "bm", "--h", "0.3"],
        &["sandbox", "z-inclusion", "--s", "0.5"],
        &["sandbox", "z-inclusion", "--graph", "/nonexistent/graph.csv"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sandbox"));
}

#[test]
fn violation_exits_1() {
    let o = run(&[
        "sandbox", "z-inclusion", "--graph", "path5", "--omega", "0", "--radius", "5", "--s", "0.5", "--slack", "1",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(lookup(&out, "pass"), "false");
    assert_eq!(lookup(&out, "witness"), "3");
}

#[test]
fn cone_sweep_has_constant_ratio_and_matches_golden() {
    let o = run(&["space", "--variant", "cone", "--n", "2", "--m", "6.0", "--sweep", "1:10:lin:4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "r,vol,mink_content,ratio,sharp_bound,margin");
    for line in out.lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|t| t.parse().unwrap()).collect();
        assert_eq!(cols[1], 2.0 * cols[0].powi(3));
        assert!((cols[3] / cols[4] - 1.0).abs() < 1e-12);
    }
    assert_eq!(out, fixture("space_cone_n2_m6.csv"));
}

#[test]
fn warped_sweep_approaches_the_sharp_bound() {
    let o = run(&["space", "--variant", "warped", "--n", "2", "--a", "0.5", "--beta", "1", "--sweep", "1:1000:log"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 51);
    let last: Vec<f64> = out.lines().last().unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    let bound = 2.0 * std::f64::consts::PI.sqrt() * 0.5f64.sqrt();
    assert!((last[4] - bound).abs() < 1e-14);
    assert!(last[3] >= bound && last[3] / bound - 1.0 < 0.01);
}

#[test]
fn csv_numbers_round_trip_exactly() {
    let o = run(&["space", "--variant", "monomial", "--n", "2", "--alpha-w", "1.5", "--sweep", "0.01:100:log:17"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines().skip(1) {
        for cell in line.split(',') {
            let x: f64 = cell.parse().unwrap();
            assert_eq!(format!("{x:?}"), cell);
        }
    }
}

#[test]
fn identical_flags_give_identical_bytes() {
    let argsets: &[&[&str]] = &[
        &["sandbox", "z-inclusion", "--seeds", "40", "--seed", "7"],
        &["verify", "gn", "--variant", "warped", "--n", "2", "--a", "0.5", "--p", "1.5", "--alpha", "1.2"],
        &["--format", "json", "space", "--variant", "warped", "--n", "3", "--a", "0.25", "--sweep", "1:50:lin:5"],
    ];
    for args in argsets {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "gn", "--n", "3", "--p", "2", "--alpha", "2", "--variant", "euclidean"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let extremal = out.lines().find(|l| l.contains("extremal(alpha=2;lambda=1)")).unwrap();
    let cols: Vec<&str> = extremal.split(',').collect();
    let (rhs, margin): (f64, f64) = (cols[8].parse().unwrap(), cols[10].parse().unwrap());
    assert!(margin >= 0.0 && margin / rhs < 1e-3);

    let o = run(&["verify", "faber-krahn", "--variant", "warped", "--a", "0.5", "--R", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let margin: f64 = row.split(',').nth(10).unwrap().parse().unwrap();
    assert!(margin > 0.0);

    let o = run(&["verify", "polya-szego", "--variant", "euclidean"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines().skip(1) {
        let ratio: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!((ratio - 1.0).abs() < 1e-8);
    }

    let o = run(&["verify", "fk-sweep", "--variant", "warped", "--a", "0.5", "--sweep", "10:500:log:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn z_inclusion_path_graph_prints_witness_sets() {
    let o = run(&["sandbox", "z-inclusion", "--graph", "path3", "--s", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), fixture("z_inclusion_path3.csv"));
}

#[test]
fn z_inclusion_seeded_trials() {
    let o = run(&["sandbox", "z-inclusion", "--seeds", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1 + 200 * 6);
    assert!(out.lines().skip(1).all(|l| l.split(',').nth(7) == Some("true")));
    assert!(stderr(&o).contains("200 spaces pass"));
}

#[test]
fn bm_deficit_table() {
    let o = run(&["sandbox", "bm", "--n", "2", "--h", "0.015625"]);
    assert_eq!(o.status.code(), Some(0));
    let deficits: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(10).unwrap().parse().unwrap())
        .collect();
    assert_eq!(deficits.len(), 3);
    assert!(deficits[0] >= -0.05);
    assert!(deficits.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn output_files_and_default_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("c.csv");
    let o = run(&["constants", "--n", "3", "--p", "2", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&target).unwrap(), fixture("constants_n3_p2.csv"));

    let o = bin()
        .env("SHARPINEQ_OUT_DIR", dir.path())
        .args(["--format", "json", "constants", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("constants.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["command"], "constants");
    assert_eq!(doc["config"]["n"], "2.0");
    assert_eq!(doc["violation"], false);
    assert!(doc["result"]["fk"].as_f64().unwrap() > 18.168);

    let o = bin()
        .env("SHARPINEQ_OUT_DIR", dir.path())
        .args(["sandbox", "bm", "--n", "1", "--h", "0.0625", "--out", "nested/bm.csv"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("nested/bm.csv").exists());
}

#[test]
fn saved_graph_reloads_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("grid.csv");
    let args = ["sandbox", "z-inclusion", "--graph", "grid3x4", "--omega", "0,5", "--radius", "3", "--s", "0.25"];
    let mut first: Vec<&str> = args.to_vec();
    first.extend(["--save-graph", saved.to_str().unwrap()]);
    let a = run(&first);
    assert_eq!(a.status.code(), Some(0));
    let mut second: Vec<&str> = args.to_vec();
    second[3] = saved.to_str().unwrap();
    let b = run(&second);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
