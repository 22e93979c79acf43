use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2ssd")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    let v = serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)));
    (code(&o), v)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("g2ssd-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn polys(v: &Value) -> Vec<Vec<String>> {
    serde_json::from_value(v.clone()).unwrap()
}

fn strs(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn analyze_deg6() {
    let (c, v) = json(&["space", "analyze", "--fixture", "deg6"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"]["status"], "certified");
    assert_eq!(polys(&v["t"]), vec![strs(&["1/1"]); 6]);
    assert_eq!(v["self_dual"], true);
}

#[test]
fn analyze_monomial() {
    let (c, v) = json(&["space", "analyze", "--fixture", "mono-2-3"]);
    assert_eq!(c, 0);
    let x = strs(&["0/1", "1/1"]);
    let one = strs(&["1/1"]);
    assert_eq!(polys(&v["t"]), vec![x.clone(), one.clone(), x.clone(), x.clone(), one, x]);
}

#[test]
fn analyze_not_self_dual() {
    let (c, v) = json(&["space", "analyze", "--fixture", "not-self-dual"]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"]["status"], "not-ssd");
    assert_eq!(v["verdict"]["stage"], "self-dual");
}

#[test]
fn input_errors_exit_two() {
    let bad = temp("bad.json", "{\"basis\": [[\"1/0\"]]}");
    assert_eq!(code(&run(&["space", "analyze", bad.to_str().unwrap()])), 2);
    let junk = temp("junk.json", "not json");
    assert_eq!(code(&run(&["space", "check-ssd", junk.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["space", "check-ssd", "--fixture", "nope"])), 2);
    assert_eq!(code(&run(&["verify", "table1", "--corrupt", "771"])), 2);
}

#[test]
fn table_verification() {
    let o = run(&["verify", "table1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("35/35"));
    let o = run(&["verify", "table1", "--fixture", "mono-1-3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("35/35"));
}

#[test]
fn corrupted_entry_is_named() {
    let o = run(&["verify", "table1", "--corrupt", "127"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("MISMATCH 127"), "{}", stdout(&o));
    let o = run(&["verify", "threeform", "--corrupt", "237"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("MISMATCH 237"), "{}", stdout(&o));
}

#[test]
fn threeform_values() {
    let o = run(&["verify", "threeform"]);
    assert_eq!(code(&o), 0);
    let (c, v) = json(&["g2", "threeform"]);
    assert_eq!(c, 0);
    assert_eq!(v["form"]["147"], "1/4");
    assert_eq!(v["form"]["237"], "-1/2");
    let (c, v) = json(&["g2", "threeform", "--fixture", "mono-1-3"]);
    assert_eq!(c, 0);
    assert_eq!(v["matches_standard"], true);
}

#[test]
fn standard_basis_round_trip() {
    let o = run(&["space", "standard-basis", "--fixture", "mono-2-3", "--json"]);
    assert_eq!(code(&o), 0);
    let f = temp("std.json", &stdout(&o));
    assert_eq!(code(&run(&["space", "check-ssd", f.to_str().unwrap()])), 0);
    let o = run(&["space", "analyze", "--fixture", "mono-1-3", "--json"]);
    let f = temp("report.json", &stdout(&o));
    let (c, v) = json(&["space", "analyze", f.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["degrees"], serde_json::json!([0, 1, 3, 4, 5, 7, 8]));
}

#[test]
fn flags_of_deg6() {
    let (c, v) = json(&["g2", "flags", "--fixture", "deg6"]);
    assert_eq!(c, 0);
    assert_eq!(v["g2_isotropic"], true);
    assert_eq!(polys(&v["pair"]), vec![strs(&["1/1"]), strs(&["1/1"])]);
}

#[test]
fn spin_commands() {
    let v4 = temp("v4.json", r#"{"vector": ["0", "0", "0", "1", "0", "0", "0"]}"#);
    let (c, v) = json(&["spin", "preimages", v4.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["kind"], "pair");
    let u = temp(
        "u.json",
        r#"{"vectors": [["1","0","0","0","0","0","0"], ["0","1","0","0","0","0","0"], ["0","0","1","0","0","0","0"]]}"#,
    );
    let (c, v) = json(&["spin", "embed", u.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["on_conic"], true);
    let (c, v) = json(&["g2", "kernel", v4.to_str().unwrap()]);
    assert_eq!(c, 0);
    assert_eq!(v["kernel"].as_array().unwrap().len(), 1);
    let v1 = temp("v1.json", r#"{"vector": ["1", "0", "0", "0", "0", "0", "0"]}"#);
    let (_, v) = json(&["g2", "kernel", v1.to_str().unwrap()]);
    assert_eq!(v["kernel"].as_array().unwrap().len(), 3);
    assert_eq!(v["isotropic"], true);
}

#[test]
fn wronskian_command() {
    let f = temp("w.json", r#"{"polys": [["0", "1"], ["0", "0", "0", "1"]]}"#);
    let (c, v) = json(&["poly", "wronskian", f.to_str().unwrap(), "--fixture", "deg6"]);
    assert_eq!(c, 0);
    let w: Vec<String> = serde_json::from_value(v["wronskian"].clone()).unwrap();
    assert_eq!(w, strs(&["0/1", "0/1", "0/1", "2/1"]));
    assert_eq!(v["divided"], v["wronskian"]);
}

#[test]
fn population_of_trivial_pair() {
    let args = ["bethe", "population", "--fixture", "deg6", "--depth", "5", "--json"];
    let a = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, run(&args).stdout, "output must be reproducible");
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let basis = polys(&v["space"]["basis"]);
    assert_eq!(basis.len(), 7);
    assert_eq!(basis.iter().map(|b| b.len() - 1).collect::<Vec<_>>(), (0..7).collect::<Vec<_>>());
    assert_eq!(v["weights"]["single_orbit"], true);
    let member = &v["members"][3];
    assert!(member["parent"].is_u64() && member["direction"].is_u64());
}

#[test]
fn population_of_monomial_seed() {
    let (c, v) = json(&["bethe", "population", "--fixture", "mono-1-3", "--depth", "5"]);
    assert_eq!(c, 0);
    let degrees: Vec<usize> = polys(&v["space"]["basis"]).iter().map(|b| b.len() - 1).collect();
    assert_eq!(degrees, vec![0, 1, 3, 4, 5, 7, 8]);
}

#[test]
fn bad_seed_is_diagnosed() {
    let f = temp("x2.json", r#"{"y": [["0", "0", "1"], ["1"]]}"#);
    let o = run(&["bethe", "population", f.to_str().unwrap(), "--depth", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("multiple roots"));
}

#[test]
fn reproduce_chains_through_files() {
    let (c, v) = json(&["bethe", "reproduce", "--fixture", "deg6", "--direction", "1"]);
    assert_eq!(c, 0);
    assert_eq!(polys(&v["seed"]["y"]), vec![strs(&["0/1", "1/1"]), strs(&["1/1"])]);
    let f = temp("r1.json", &serde_json::to_string(&v).unwrap());
    let (c, v) = json(&["bethe", "reproduce", f.to_str().unwrap(), "--direction", "2"]);
    assert_eq!(c, 0);
    assert_eq!(polys(&v["seed"]["y"])[1].len(), 5);
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 12);
}
