use std::io::Write;

use assert_cmd::Command;
use quasinv::report::SeriesRecord;
use tempfile::NamedTempFile;

fn quasinv() -> Command {
    Command::cargo_bin("quasinv").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = quasinv().args(args).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn poly_file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    writeln!(f, "{text}").unwrap();
    f
}

#[test]
fn two_variable_numerator() {
    let out = stdout(&["numerator", "--n", "2", "--m", "1"]);
    assert!(out.starts_with("1+t^3\nstabilized: true\n"), "{out}");
    assert!(out.contains("palindromic: true"));
}

#[test]
fn numerator_json_round_trips() {
    let out = stdout(&["numerator", "--n", "3", "--m", "1", "--field", "fp:3", "--format", "json"]);
    let r: SeriesRecord = serde_json::from_str(out.trim()).unwrap();
    assert_eq!((r.n, r.m, r.field.as_str()), (3, 1, "fp:3"));
    assert_eq!(r.coeffs, [1, 0, 0, 2, 0, 0, 2, 0, 0, 1]);
    assert_eq!(r.stabilized, Some(true));
    assert_eq!(serde_json::to_string(&r).unwrap(), out.trim());
}

#[test]
fn dims_formats() {
    assert_eq!(stdout(&["dims", "--n", "2", "--m", "1", "--max-degree", "5"]), "1,1,2,3,4,5\n");
    let csv = stdout(&["dims", "--n", "2", "--m", "1", "--max-degree", "3", "--format", "csv"]);
    assert_eq!(csv, "degree,dim\n0,1\n1,1\n2,2\n3,3\n");
}

#[test]
fn output_is_deterministic() {
    let args = ["anomalies", "--n", "3", "--m-max", "4", "--p-max", "7"];
    let a = quasinv().args(args).output().unwrap();
    let b = quasinv().args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn anomaly_csv() {
    let out = stdout(&["anomalies", "--n", "3", "--m-max", "4", "--p-max", "7"]);
    let rows: Vec<&str> = out.lines().collect();
    assert!(rows[0].starts_with("m,p,anomalous,witness_a,witness_k,"));
    assert_eq!(rows.len(), 1 + 5 * 4);
    let anomalous: Vec<String> = rows[1..]
        .iter()
        .map(|r| r.split(',').collect::<Vec<_>>())
        .filter(|f| f[2] == "true")
        .map(|f| format!("{}:{}:{},{}", f[0], f[1], f[3], f[4]))
        .collect();
    assert_eq!(anomalous, ["1:3:1,0", "2:5:1,0", "3:2:3,0", "3:3:2,0", "3:7:1,0", "4:2:3,0", "4:3:2,0"]);
}

#[test]
fn membership_from_file() {
    let cube = poly_file("x1^3 - 3*x1^2*x2 + 3*x1*x2^2 - x2^3");
    let linear = poly_file("x1");
    let path = |f: &NamedTempFile| f.path().to_str().unwrap().to_string();
    assert_eq!(stdout(&["member", "--m", "1", "--file", &path(&cube)]), "true\n");
    assert_eq!(stdout(&["member", "--m", "1", "--n", "2", "--file", &path(&linear)]), "false\n");
    assert_eq!(stdout(&["member", "--m", "0", "--n", "2", "--file", &path(&linear)]), "true\n");
    let json = stdout(&["member", "--m", "1", "--file", &path(&cube), "--format", "json"]);
    assert_eq!(json, "{\"member\":true}\n");
}

#[test]
fn twisted_commands() {
    assert_eq!(stdout(&["twisted", "series", "--m", "1", "--f", ""]), "1+t^3\n");
    let pm = stdout(&["twisted", "pm", "--m", "1", "--f", "(x)^z"]);
    assert!(pm.contains("member: true"), "{pm}");
    let constant = poly_file("1");
    let path = constant.path().to_str().unwrap();
    assert_eq!(stdout(&["twisted", "member", "--m", "0", "--f", "(x)^2", "--file", path]), "true\n");
    assert_eq!(stdout(&["twisted", "member", "--m", "1", "--f", "(x)^2", "--file", path]), "false\n");
}

#[test]
fn qdef_member() {
    let cube = poly_file("x1^3 - 3*x1^2*x2 + 3*x1*x2^2 - x2^3");
    let path = cube.path().to_str().unwrap();
    assert_eq!(stdout(&["qdef", "member", "--m", "1", "--q", "1", "--file", path]), "true\n");
    assert_eq!(stdout(&["qdef", "member", "--m", "1", "--q", "2", "--file", path]), "false\n");
}

#[test]
fn exit_codes() {
    quasinv().args(["bogus"]).assert().code(1);
    quasinv().args(["--help"]).assert().code(0);
    quasinv().args(["witness", "--m", "1", "--p", "4", "--n", "3"]).assert().code(1);
    quasinv().args(["numerator", "--n", "3", "--m", "1", "--max-degree", "2"]).assert().code(1);
    quasinv().args(["member", "--m", "1", "--file", "/nonexistent/poly"]).assert().code(1);
    quasinv().args(["twisted", "pm", "--m", "3", "--f", "(x)^-1"]).assert().code(1);
    quasinv().args(["construct", "--m", "1", "--p", "3", "--n", "3"]).assert().code(0);
}
