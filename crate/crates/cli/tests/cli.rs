use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supertree"))
        .args(args)
        .env_remove("SUPERTREE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn poly_of_a_single_edge() {
    let dir = tempfile::tempdir().unwrap();
    let h = write(dir.path(), "h.json", r#"{"r":3,"n":3,"edges":[[0,1,2]]}"#);
    let o = run(&["poly", "--file", &h]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "x^3 - 1");
}

#[test]
fn rho_by_both_methods() {
    let o = run(&[
        "rho",
        "--family",
        "loose-path",
        "-m",
        "5",
        "-r",
        "3",
        "--method",
        "both",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let want = (2.0 * (std::f64::consts::PI / 7.0).cos()).powf(2.0 / 3.0);
    assert!((v["matching"].as_f64().unwrap() - want).abs() < 1e-12);
    assert!((v["power"].as_f64().unwrap() - want).abs() < 1e-9);
    assert!(v["gap"].as_f64().unwrap() < 1e-9);
}

#[test]
fn minima_check_passes() {
    let o = run(&["verify", "--theorem", "6.2", "-m", "5", "-r", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).starts_with("ranking: PASS"));
    let named = run(&[
        "verify",
        "--theorem",
        "minima",
        "-m",
        "4",
        "-r",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(named.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&named)).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn perturbed_expectation_fails_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let swapped = write(
        dir.path(),
        "expected.json",
        r#"[{"family":"D","m":5,"r":3},{"family":"LoosePath","m":5,"r":3}]"#,
    );
    let o = run(&[
        "verify",
        "--theorem",
        "6.2",
        "-m",
        "5",
        "-r",
        "3",
        "--expected",
        &swapped,
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));

    let diameter = write(
        dir.path(),
        "top.json",
        r#"[{"family":"TDoublePrime","m":7,"d":4,"r":3}]"#,
    );
    let o = run(&[
        "verify",
        "--theorem",
        "5.9",
        "-m",
        "7",
        "-d",
        "4",
        "-r",
        "3",
        "--expected",
        &diameter,
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"r":3,"n":5,"edges":[[0,1,2],[2,3]]}"#,
    );
    let o = run(&["poly", "--file", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("edges[1]"), "{}", stderr(&o));

    for args in [
        vec!["verify", "--theorem", "9.9"],
        vec!["frobnicate"],
        vec!["rho", "--family", "hyperstar", "-r", "3"],
        vec![
            "verify",
            "--theorem",
            "5.9",
            "-m",
            "4",
            "-d",
            "3",
            "-r",
            "3",
        ],
        vec!["compare", "--family", "d", "-m", "4", "-r", "3"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn compare_two_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "p.json",
        r#"{"r":3,"n":9,"edges":[[0,1,2],[2,3,4],[4,5,6],[6,7,8]]}"#,
    );
    let star = write(
        dir.path(),
        "s.json",
        r#"{"r":3,"n":9,"edges":[[0,1,2],[0,3,4],[0,5,6],[0,7,8]],"name":"star"}"#,
    );
    let o = run(&[
        "compare", "--file", &path, "--file", &star, "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"]["relation"], "StrictlyLess");
    assert_eq!(v["right"], "star");
}

#[test]
fn export_ranking_table_as_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s433.csv");
    let o = run(&[
        "export",
        "-m",
        "4",
        "-d",
        "3",
        "-r",
        "3",
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    let listed = run(&[
        "enumerate",
        "-m",
        "4",
        "-d",
        "3",
        "-r",
        "3",
        "--format",
        "json",
    ]);
    let trees: Vec<serde_json::Value> = serde_json::from_str(&stdout(&listed)).unwrap();
    assert_eq!(csv.lines().count(), trees.len() + 1);
    assert!(csv.contains("D(m=4,r=3)"));
}

#[test]
fn build_and_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested/t.json");
    let o = run(&[
        "export",
        "--family",
        "tmd-i",
        "-m",
        "7",
        "-d",
        "4",
        "-r",
        "3",
        "-i",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let built = run(&[
        "build", "--family", "tmd-i", "-m", "7", "-d", "4", "-r", "3", "-i", "3",
    ]);
    assert_eq!(
        fs::read_to_string(&out).unwrap().trim(),
        stdout(&built).trim()
    );
    let a = run(&["poly", "--file", out.to_str().unwrap()]);
    let b = run(&[
        "poly", "--family", "tmd-i", "-m", "7", "-d", "4", "-r", "3", "-i", "3",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn randomised_batches_take_a_seed() {
    let args = |seed: &'static str| {
        run(&[
            "verify",
            "--theorem",
            "graft-adjacent",
            "--count",
            "20",
            "--seed",
            seed,
            "--format",
            "json",
        ])
    };
    let (a, b) = (args("5"), args("5"));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
}
