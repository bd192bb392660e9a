use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use reflmap::curveinv::{full_report, InvariantReport, Ordering};
use reflmap::group::DEFAULT_MAX_ORDER;
use reflmap::poly::Limits;
use reflmap::problem::Problem;

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name)
}

fn run(args: &[&str], file: &PathBuf) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reflmap")).args(args).arg(file).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn info_reports_the_dihedral_group() {
    let o = run(&["info"], &problem("f1_d8.json"));
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("order 8, reflections 4"), "{text}");
    assert!(text.contains("omega verified"));
}

#[test]
fn bad_orbit_map_exits_with_two() {
    let o = run(&["info"], &problem("bad_omega.json"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("omega verification failed"));
}

#[test]
fn input_errors_exit_with_one() {
    let o = run(&["image"], &problem("does_not_exist.json"));
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, r#"{{"conductor": 8, "space": ["u"], "bogus": 1}}"#).unwrap();
    let o = run(&["image"], &f.path().to_path_buf());
    assert_eq!(o.status.code(), Some(1));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        f,
        r#"{{"conductor": 8, "space": ["u", "v", "w"], "target": ["X", "Y", "Z"],
            "group": {{"builtin": "dihedral_D8"}}, "hypersurface": ["w - u**"]}}"#
    )
    .unwrap();
    let o = run(&["image"], &f.path().to_path_buf());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exhausted_budget_exits_with_three() {
    let o = run(&["--step-budget", "10", "image"], &problem("s4_t1.json"));
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn invariants_json_matches_the_library() {
    let o = run(&["--json", "invariants"], &problem("f2_d8.json"));
    assert!(o.status.success());
    let parsed: InvariantReport = serde_json::from_slice(&o.stdout).unwrap();
    let m = Problem::from_file(&problem("f2_d8.json")).unwrap().mapping(DEFAULT_MAX_ORDER, Limits::default()).unwrap();
    assert_eq!(parsed, full_report(&m, Ordering::ReflectionsFirst).unwrap());
}

#[test]
fn table_ordering_permutes_the_default_ordering() {
    let default: InvariantReport = serde_json::from_slice(&run(&["--json", "invariants"], &problem("s4_chart.json")).stdout).unwrap();
    let table: InvariantReport =
        serde_json::from_slice(&run(&["--json", "--ordering", "table", "invariants"], &problem("s4_chart.json")).stdout).unwrap();
    let mut a = default.ordering.clone();
    let mut b = table.ordering.clone();
    a.sort();
    b.sort();
    assert_eq!(a, b);
    assert_eq!(default.mu_total, table.mu_total);
    assert_eq!(default.delta_total, table.delta_total);
}

#[test]
fn output_is_deterministic() {
    for (cmd, file) in [("image", "f1_d8.json"), ("branches", "f2_d8.json"), ("invariants", "f2_d8.json"), ("degree", "s4_t0.json")] {
        let a = run(&[cmd], &problem(file));
        let b = run(&[cmd], &problem(file));
        assert!(a.status.success(), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn k2_selects_elements_by_index_or_exponents() {
    let o = run(&["k2", "--exponents", "1,1,1,0,0"], &problem("k2c3c5.json"));
    assert!(o.status.success());
    assert!(stdout(&o).contains("K2: dimension 1, exceptional component none"));

    let o = run(&["--json", "k2", "--sigma", "1"], &problem("xy_graph_k2.json"));
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sigma"], 1);

    let o = run(&["k2", "--sigma", "0"], &problem("xy_graph_k2.json"));
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["k2"], &problem("xy_graph_k2.json"));
    assert_eq!(o.status.code(), Some(1));
}
