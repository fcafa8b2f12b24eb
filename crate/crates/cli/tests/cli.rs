use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_groupoid"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generate(spec: &str) -> String {
    let o = run(&["generate", spec], "");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn check_cyclic_group() {
    let o = run(&["check"], &generate("zn(4)"));
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("abelian: yes (identity-groupoid-theorem)"), "{s}");
    assert!(s.contains("hamiltonian: yes"));
}

#[test]
fn check_q4a() {
    let o = run(&["check", "-", "--json"], &generate("fixture(q4a)"));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report_version"], 1);
    assert_eq!(v["abelian"]["verdict"], "no");
    assert_eq!(v["abelian"]["route"], "quasigroup-theorem");
    assert_eq!(v["inconsistent"], false);
    assert!(v["abelian"]["witness"].is_object());
    assert!(v.get("elapsed_ms").is_none());
}

#[test]
fn check_json_is_deterministic() {
    let t = generate("fixture(s3)");
    assert_eq!(run(&["check", "--json"], &t).stdout, run(&["check", "--json"], &t).stdout);
    let timed = json(&run(&["check", "--json", "--timing"], &t));
    assert!(timed["elapsed_ms"].is_number());
}

#[test]
fn band8_reason() {
    let s = stdout(&run(&["check"], &generate("fixture(band8)")));
    assert!(s.contains("semigroup-theorem: no - idempotents not closed"), "{s}");
}

#[test]
fn fast_only_leaves_plain_groupoids_open() {
    let o = run(&["check", "--fast-only", "--json"], "2\n1 1\n0 0\n");
    let v = json(&o);
    assert_eq!(v["abelian"]["verdict"], "undetermined");
    assert!(v["abelian"]["route"].is_null());
}

#[test]
fn decompose_q4a() {
    let o = run(&["decompose", "--base", "1"], &generate("fixture(q4a)"));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["kind"], "loop");
    let z4: Vec<Vec<usize>> = (0..4).map(|x| (0..4).map(|y| (x + y) % 4).collect()).collect();
    assert_eq!(v["plus"]["entries"], serde_json::json!(z4));
}

#[test]
fn decompose_rectangular_band() {
    let v = json(&run(&["decompose"], &generate("rectband(zn(2),2,2)")));
    assert_eq!(v["kind"], "semigroup");
    assert_eq!(v["hij"]["h"]["order"], 2);
    assert_eq!(v["hij"]["i"]["order"], 2);
    assert_eq!(v["hij"]["j"]["order"], 2);
}

#[test]
fn decompose_rejects_non_quasigroup() {
    let o = run(&["decompose", "--as", "quasigroup"], &generate("leftzero(2)"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_errors_have_positions() {
    let o = run(&["check"], "2\n0 1\n1 x\n");
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3, column 3"), "{err}");
}

#[test]
fn census_order_two() {
    let o = run(&["census", "--order", "2", "--class", "semigroup", "--json"], "");
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["scanned"], 8);
    assert_eq!(v["disagreements"], 0);
}

#[test]
fn census_latin_squares() {
    let o = run(&["census", "--order", "4", "--class", "quasigroup", "--csv"], "");
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let row = s.lines().nth(1).unwrap();
    assert!(row.starts_with("4,quasigroup,exhaustive,,576,192,384,0,192,384,0,"), "{row}");
    assert!(row.ends_with(",0"));
}

#[test]
fn sampled_census_is_reproducible() {
    let args = ["census", "--order", "5", "--class", "semigroup", "--sample", "200", "--seed", "7", "--csv"];
    let a = run(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, run(&args, "").stdout);
}
