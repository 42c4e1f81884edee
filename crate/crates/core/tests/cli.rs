use std::path::Path;
use std::process::{Command, Output};

use lsystems::io::parse_complex;
use lsystems::{CMatrix, LSystem, C64};
use serde_json::Value;

fn lsys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsys"))
        .args(args)
        .output()
        .expect("run lsys")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_model(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).display().to_string();
    let mut full = vec!["model"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let out = lsys(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn complex(v: &Value) -> C64 {
    C64::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn model_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = write_model(dir.path(), "d.json", &["--kind", "d", "--lambda0", "1+1i"]);
    let sys: LSystem = serde_json::from_str(&std::fs::read_to_string(&d).unwrap()).unwrap();
    assert_eq!(
        *sys.main_operator(),
        CMatrix::from_diag(&[C64::new(1.0, 1.0), C64::new(-1.0, 1.0)])
    );

    let out = lsys(&["model", "--kind", "a", "--lambda0", "0+1i"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(complex(&json["T"][0][0]), C64::new(0.0, -1.0));
    assert_eq!(complex(&json["T"][1][1]), C64::new(0.0, -1.0));
    assert_eq!(complex(&json["J"][0][0]), C64::new(-1.0, 0.0));
    assert_eq!(complex(&json["J"][1][1]), C64::new(-1.0, 0.0));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(lsys(&["model", "--kind", "d", "--lambda0", "1-1i"]).status.code(), Some(2));
    assert_eq!(lsys(&["model", "--kind", "d", "--lambda0", "1 + 1i"]).status.code(), Some(2));
    assert_eq!(lsys(&["model", "--kind", "general", "--lambda", "1+1i"]).status.code(), Some(2));
    assert_eq!(lsys(&["example", "--n", "3"]).status.code(), Some(2));
    assert_eq!(lsys(&["verify", "--seed", "42", "--cases", "0"]).status.code(), Some(2));
    assert_eq!(lsys(&["entropy", "--system", "/nonexistent/sys.json"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // Im T = 0 but K != 0
    std::fs::write(
        &bad,
        r#"{"n":1,"m":1,"T":[[[0.0,0.0]]],"K":[[[1.0,0.0]]],"J":[[[1.0,0.0]]]}"#,
    )
    .unwrap();
    assert_eq!(lsys(&["entropy", "--system", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn eval_impedance_and_spectrum_hit() {
    let dir = tempfile::tempdir().unwrap();
    let d = write_model(dir.path(), "d.json", &["--kind", "d", "--lambda0", "0+1i"]);
    let out = lsys(&["eval", "--system", &d, "--z", "0+2i", "--what", "impedance"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    let v = &json["value"];
    assert!((complex(&v[0][0]) - C64::new(0.0, 0.5)).norm() <= 1e-12);
    assert!((complex(&v[1][1]) - C64::new(0.0, 0.5)).norm() <= 1e-12);
    assert!(complex(&v[0][1]).norm() <= 1e-12);

    let hit = lsys(&["eval", "--system", &d, "--z", "i", "--what", "transfer"]);
    assert_eq!(hit.status.code(), Some(3));
}

#[test]
fn eval_round_trip_keeps_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let d = write_model(dir.path(), "d.json", &["--kind", "d", "--lambda0", "0.3+1.7i"]);
    let sys: LSystem = serde_json::from_str(&std::fs::read_to_string(&d).unwrap()).unwrap();
    let z = parse_complex("0.25-0.5i").unwrap();
    let out = lsys(&["eval", "--system", &d, "--z", "0.25-0.5i"]);
    let json = stdout_json(&out);
    let direct = sys.transfer(z).unwrap();
    for r in 0..2 {
        for c in 0..2 {
            let printed = complex(&json["value"][r][c]);
            assert!((printed - direct[(r, c)]).norm() <= 1e-15);
        }
    }
}

#[test]
fn entropy_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = write_model(dir.path(), "d.json", &["--kind", "d", "--lambda0", "1+1i"]);
    let json = stdout_json(&lsys(&["entropy", "--system", &d]));
    assert!((json["entropy"].as_f64().unwrap() - 5f64.ln()).abs() <= 1e-12);
    assert_eq!(json["regime"], "dissipative");
    assert!((json["coefficient"].as_f64().unwrap() - 0.96).abs() <= 1e-12);

    let m = write_model(dir.path(), "m.json", &["--kind", "m", "--lambda0", "1+1i"]);
    let json = stdout_json(&lsys(&["entropy", "--system", &m]));
    assert_eq!(json["entropy"].as_f64(), Some(0.0));
    assert_eq!(json["coefficient"].as_f64(), Some(0.0));

    let a = write_model(dir.path(), "a.json", &["--kind", "a", "--lambda0", "0+1i"]);
    let json = stdout_json(&lsys(&["entropy", "--system", &a]));
    assert_eq!(json["entropy"], "-inf");
    assert_eq!(json["coefficient"].as_f64(), Some(1.0));
}

#[test]
fn couple_then_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = write_model(dir.path(), "g1.json", &["--kind", "general", "--lambda", "1+1i", "--mu", "1+1i"]);
    let g2 = write_model(dir.path(), "g2.json", &["--kind", "general", "--lambda", "2i", "--mu", "2i"]);
    let coupled = dir.path().join("c.json").display().to_string();
    let out = lsys(&["couple", "--left", &g1, "--right", &g2, "--out", &coupled]);
    assert_eq!(out.status.code(), Some(0));
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&coupled).unwrap()).unwrap();
    assert_eq!(file["n"], 4);
    assert_eq!(file["provenance"]["left"], g1.as_str());
    assert_eq!(file["provenance"]["right"], g2.as_str());

    let json = stdout_json(&lsys(&["entropy", "--system", &coupled]));
    assert!((json["entropy"].as_f64().unwrap() - 45f64.ln()).abs() <= 1e-10);

    let m = write_model(dir.path(), "m.json", &["--kind", "m", "--lambda0", "1+1i"]);
    let d = write_model(dir.path(), "d.json", &["--kind", "d", "--lambda0", "1+1i"]);
    assert_eq!(lsys(&["couple", "--left", &d, "--right", &m]).status.code(), Some(2));
}

#[test]
fn surface_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let out = lsys(&[
        "surface", "--kind", "a", "--x-min", "-1", "--x-max", "1", "--y-min", "0.5", "--y-max", "1.5", "--step",
        "0.5", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 1 + 5 * 3);
    assert!(csv.contains("\n0,1,-inf\n"));
    assert_eq!(lsys(&["surface", "--kind", "m"]).status.code(), Some(2));
    assert_eq!(lsys(&["surface", "--kind", "d", "--y-min", "0"]).status.code(), Some(2));
}

#[test]
fn examples_exit_zero() {
    let two = lsys(&["example", "--n", "2"]);
    assert_eq!(two.status.code(), Some(0));
    let stderr = String::from_utf8(two.stderr).unwrap();
    assert!(stderr.trim_end().ends_with("S_d=ln5=1.609438, D_d=0.960000, S_m=0, S_a=-ln5, A_a=0.960000"));
    let table = String::from_utf8(two.stdout).unwrap();
    assert!(table.starts_with("system,quantity,value,target,residual,status\n"));
    assert!(!table.contains("MISMATCH"));

    let one = lsys(&["example", "--n", "1"]);
    assert_eq!(one.status.code(), Some(0));
    let stderr = String::from_utf8(one.stderr).unwrap();
    assert!(stderr.trim_end().ends_with("S_d=+inf, D_d=1, S_m=0, D_m=0, S_a=-inf, A_a=1"));
}

#[test]
fn verify_is_deterministic() {
    let a = lsys(&["verify", "--seed", "42", "--cases", "100"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = lsys(&["verify", "--seed", "42", "--cases", "100"]);
    assert_eq!(a.stdout, b.stdout);
    let json: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(json["suites"].as_array().unwrap().len(), 7);
    assert!(json["suites"].as_array().unwrap().iter().all(|s| s["passed"] == true));
}
