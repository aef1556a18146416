use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn greendecay(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_greendecay"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_mtx(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_prints_csv_and_summary() {
    let out = greendecay(&["run", "ex1a", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 51);
    assert_eq!(lines[0], "i,j,exact,lu,qr,varah,dms,frommer,chui_hasson");
    let row4: Vec<f64> = lines[4].split(',').take(4).map(|s| s.parse().unwrap()).collect();
    assert_eq!(&row4[..2], &[4.0, 1.0]);
    assert!((row4[3] - 0.0567027).abs() < 1e-6);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("mu: 0.24"), "{err}");
}

#[test]
fn run_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex5.csv");
    let out = greendecay(&["run", "ex5", "--bandwidth", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 21);
    assert!(!text.lines().nth(1).unwrap().contains(",NA,NA,NA,NA,NA"));
}

#[test]
fn run_ex3_uses_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_mtx(
        dir.path(),
        "good.mtx",
        "%%MatrixMarket matrix coordinate real general\n4 4 6\n1 1 5\n2 2 5\n3 3 5\n4 4 5\n2 1 1\n1 3 1\n",
    );
    let out = greendecay(&["run", "ex3", "--input", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 5);

    // [[2, 0], [4, 2]] after the shift: invertible but not dominant
    let bad = write_mtx(
        dir.path(),
        "bad.mtx",
        "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n2 2 3\n2 1 4\n",
    );
    let out = greendecay(&["run", "ex3", "--input", &bad]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn errors_exit_with_one() {
    let out = greendecay(&["run", "ex3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("--input"));

    assert_eq!(greendecay(&["run", "ex9"]).status.code(), Some(1));
    assert_eq!(greendecay(&["run", "ex1a", "--column", "51"]).status.code(), Some(1));
    assert_eq!(greendecay(&["bounds", "/nonexistent/file.mtx"]).status.code(), Some(1));
    assert_eq!(greendecay(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(greendecay(&["--help"]).status.code(), Some(0));
}

#[test]
fn bounds_command() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_mtx(
        dir.path(),
        "tri.mtx",
        "%%MatrixMarket matrix coordinate real symmetric\n3 3 5\n1 1 4\n2 2 4\n3 3 4\n2 1 -1\n3 2 -1\n",
    );
    let out = greendecay(&["bounds", &tri]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("mu: 0.5\n"), "{text}");
    assert!(text.contains("gamma: 0.5\n"), "{text}");
    assert!(text.contains("M: 0.8333333333333334\n"), "{text}");
    assert!(text.contains("varah: 0.5\n"), "{text}");

    let weak = write_mtx(
        dir.path(),
        "weak.mtx",
        "%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n2 2 1\n2 1 2\n",
    );
    let out = greendecay(&["bounds", &weak]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("gamma: NA"));
}

#[test]
fn verify_small_ensemble() {
    let out = greendecay(&["verify", "--count", "10", "--max-n", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8, "{text}");
}
