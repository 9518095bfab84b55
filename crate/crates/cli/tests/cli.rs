use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kostka"))
        .args(args)
        .env_remove("KOSTKA_MAX_FACES")
        .env_remove("KOSTKA_TIME_BUDGET")
        .output()
        .expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kostka"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn face_count_r4_d2() {
    let v = json_of(&run(&["faces", "4", "--dim", "2", "--count-only"]));
    assert_eq!(v, json!({"r": 4, "counts": {"2": 89}}));
    let t = run(&["faces", "4", "--dim", "2", "--count-only", "--format", "table"]);
    assert_eq!(String::from_utf8(t.stdout).unwrap(), "89\n");
}

#[test]
fn face_listing_is_json_lines() {
    let out = run(&["faces", "3", "--dim", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 16);
    assert!(lines.iter().all(|l| l["dim"] == 1 && l["labels"].as_array().unwrap().len() == 2));
}

#[test]
fn h_vector_r3() {
    let v = json_of(&run(&["hvector", "3"]));
    assert_eq!(v["h"], json!([1, 3, 1, 1, 1]));
    let c = json_of(&run(&["hvector", "4", "--check-conjecture"]));
    assert_eq!(c["holds"], true);
}

#[test]
fn construct_gcd1_20_15() {
    let v = json_of(&run(&["construct", "gcd1", "20", "15"]));
    assert_eq!(v["r"], 22);
    let mut lambda = vec![20; 15];
    lambda.extend([0; 7]);
    let mut mu = vec![15; 7];
    mu.extend([13; 15]);
    assert_eq!(v["point"]["lambda"], json!(lambda));
    assert_eq!(v["point"]["mu"], json!(mu));
    assert_eq!(v["hilbert_basis"], true);
    assert_eq!(v["lies_on_2face"], true);
}

#[test]
fn hb_check_reads_arrays_and_single_points() {
    let single = json_of(&run_stdin(&["hb-check", "-"], r#"{"r":4,"lambda":[3,3],"mu":[3,1,1,1]}"#));
    assert_eq!(single["hilbert_basis"], true);
    assert_eq!(single["column_test"], false);
    let many = json_of(&run_stdin(
        &["hb-check", "-"],
        r#"[{"r":2,"lambda":[2],"mu":[1,1]},{"r":2,"lambda":[4],"mu":[2,2]}]"#,
    ));
    let hb: Vec<bool> = many.as_array().unwrap().iter().map(|x| x["hilbert_basis"].as_bool().unwrap()).collect();
    assert_eq!(hb, [true, false]);
}

#[test]
fn csv_output_has_header_and_rows() {
    let out = run(&["fvector", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "k,f\n-1,1\n0,7\n1,16\n2,16\n3,7\n");
    let t2 = run(&["table2", "--max-r", "3", "--max-d", "1", "--format", "csv"]);
    assert_eq!(String::from_utf8(t2.stdout).unwrap(), "d,r,f\n0,1,1\n0,2,3\n0,3,7\n1,1,0\n1,2,3\n1,3,16\n");
}

#[test]
fn table_layouts() {
    let out = run(&["table1", "--max-r", "4", "--format", "table"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let last = text.lines().last().unwrap();
    assert_eq!(last.split_whitespace().collect::<Vec<_>>(), ["m(d)", "4", "8", "12", "18", "27"]);
}

#[test]
fn maxface_forms() {
    assert_eq!(json_of(&run(&["maxface", "--closed-form", "6"]))["m"], 27);
    assert_eq!(json_of(&run(&["maxface", "4", "3"]))["max_vertices"], 7);
    assert_eq!(run(&["maxface", "4"]).status.code(), Some(2));
}

#[test]
fn fit_from_file() {
    let dir = std::env::temp_dir().join(format!("kostka-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("values.json");
    std::fs::write(&path, r#"{"1":0,"2":3,"3":16,"4":52,"5":132,"6":288}"#).unwrap();
    let v = json_of(&run(&["fit", "1", "--values", path.to_str().unwrap(), "--eval-up-to", "13"]));
    assert_eq!(v["alpha"], json!({"2": 3, "3": 7, "4": 6, "5": 2, "6": 1}));
    assert_eq!(v["values"]["13"], 10816);
    std::fs::write(&path, r#"{"1":0,"2":3,"3":16,"4":52,"5":132,"6":288,"7":566}"#).unwrap();
    assert_eq!(run(&["fit", "1", "--values", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["bogus"][..],
        &["faces", "4", "--dim", "9"],
        &["incidence", "3", "5", "1", "0"],
        &["density", "100", "1,4"],
        &["construct", "gcd1", "3", "3"],
        &["hb-check", "/nonexistent/points.json"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    let bad = run_stdin(&["hb-check", "-"], r#"{"r":2,"lambda":[1],"mu":[2]}"#);
    assert_eq!(bad.status.code(), Some(2));
    let malformed = run_stdin(&["hb-check", "-"], "[1,2");
    assert_eq!(malformed.status.code(), Some(2));
}

#[test]
fn resource_caps_exit_3() {
    assert_eq!(run(&["faces", "6", "--max-faces", "100"]).status.code(), Some(3));
    let env = Command::new(env!("CARGO_BIN_EXE_kostka"))
        .args(["fvector", "5"])
        .env("KOSTKA_MAX_FACES", "50")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
}

#[test]
fn checks_pass() {
    assert!(json_of(&run(&["edge-check", "4"]))["mismatches"].as_array().unwrap().is_empty());
    assert!(json_of(&run(&["hb-oracle", "--max-r", "2", "--max-size", "6"]))["disagreements"]
        .as_array()
        .unwrap()
        .is_empty());
    assert!(json_of(&run(&["construct", "all", "--max", "10"]))["failures"].as_array().unwrap().is_empty());
}

#[test]
fn probability_and_density() {
    let p = json_of(&run(&["probability", "--B", "100000"]));
    assert!(p["decimal"].as_str().unwrap().starts_with("0.9372"));
    let d = json_of(&run(&["density", "30", "any"]));
    assert_eq!(d["density"], "141/145");
}

#[test]
fn scan_reports_certificate() {
    let v = json_of(&run(&["scan-initial", "20", "15", "22"]));
    assert_eq!(v["verdict"], "found");
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [&["faces", "5", "--dim", "3"][..], &["table1", "--max-r", "5"], &["rays", "4", "--format", "csv"]] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
