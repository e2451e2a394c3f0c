use std::process::{Command, Output};

fn innerlim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_innerlim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn usage_errors_exit_with_2() {
    assert_eq!(innerlim(&[]).status.code(), Some(2));
    assert_eq!(innerlim(&["pack", "--family", "two_balls"]).status.code(), Some(2));
    assert_eq!(innerlim(&["generate", "--family", "no_such_family"]).status.code(), Some(2));
    assert_eq!(innerlim(&["run", "no-such-scenario"]).status.code(), Some(2));
}

#[test]
fn passing_and_failing_scenarios() {
    let o = innerlim(&["run", "bad-balls"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["passed"], true);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(
        &path,
        r#"{"name": "strict", "steps": [{"op": "packing", "space": {"family": "taxi_box", "sides": [1], "pitch": 0.25}, "epsilon": 0.5, "min_count": 10}]}"#,
    )
    .unwrap();
    let o = innerlim(&["run", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "index,op,passed,failed_checks\n0,packing,false,min_count\n");
}

#[test]
fn empty_scenario_passes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, r#"{"name": "empty"}"#).unwrap();
    let o = innerlim(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn list_builtins() {
    let o = innerlim(&["run", "--list"]);
    assert_eq!(stdout(&o).lines().count(), 12);
    assert!(stdout(&o).lines().any(|l| l == "many-splines-divergence"));
}

#[test]
fn generate_export_and_compare() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let book = ["--family", "book", "--param", "heights=[1,0.5]", "--param", "pitch=0.25"];
    let o = innerlim(&[&["generate"], &book[..], &["--out", a.to_str().unwrap()]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let o = innerlim(&["export", a.to_str().unwrap(), "--out", b.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let o = innerlim(&["gh", a.to_str().unwrap(), b.to_str().unwrap()]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["upper"], 0.0);
    assert_eq!(r["lower"], 0.0);
}

#[test]
fn sequence_writes_packing_curves() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curves.csv");
    let o = innerlim(&[
        "sequence", "--family", "gold_foils", "--j", "2,3,4", "--h", "0.1", "--epsilon-grid", "0.4,0.8", "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("epsilon,space_index,count\n"));
    assert_eq!(text.lines().count(), 7);
    let diag: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(diag["counts"].as_array().unwrap().len(), 3);
}

#[test]
fn inner_region_plotdata() {
    let o = innerlim(&["inner", "--family", "annulus", "--param", "r1=1", "--param", "r2=2", "--h", "0.1", "--delta", "0.3", "--format", "plotdata"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("index,x0,x1\n"));
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        let r = v[0].hypot(v[1]);
        assert!(r > 1.25 && r < 1.75, "{line}");
    }
}
