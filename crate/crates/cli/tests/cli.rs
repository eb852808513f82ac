use std::fs;
use std::process::{Command, Output};

fn koszul(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn triangle_at_full_degree() {
    let o = koszul(&["homology", "--cycle", "3", "--mu", "1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "1\t(1,1,1)\t2"));
}

#[test]
fn path_of_five_vanishes_at_full_degree() {
    let o = koszul(&["homology", "--path", "5", "--full-mu", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["dim"] == 0));
}

#[test]
fn single_vertex_has_only_degree_zero() {
    let o = koszul(&["homology", "--path", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let body: Vec<String> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    assert!(!body.is_empty());
    assert!(body.iter().all(|l| l.starts_with("0\t")));
}

#[test]
fn degree_filter_and_gfp_field() {
    let o = koszul(&["homology", "--cycle", "6", "--full-mu", "--degree", "2", "--field", "gfp:1000003"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "i\tmu\tdim\n2\t(1,1,1,1,1,1)\t2\n");
}

#[test]
fn quotient_by_a_matching_keeps_the_dimension() {
    let full = koszul(&["homology", "--cycle", "6", "--full-mu"]);
    let reduced = koszul(&["homology", "--cycle", "6", "--full-mu", "--quotient", "t1-t2,t4-t5"]);
    assert_eq!(reduced.status.code(), Some(0));
    assert_eq!(stdout(&full), stdout(&reduced));
    let bad = koszul(&["homology", "--cycle", "6", "--quotient", "t1-t2,t2-t3"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cycle_five_has_a_generator_at_full_degree() {
    let o = koszul(&["generators", "--cycle", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("2\t(1,1,1,1,1)\t") && l.ends_with("\t1")));
}

#[test]
fn circle_class_has_degree_two() {
    let o = koszul(&["class", "circle:n=5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 2);
}

#[test]
fn star_and_witness_classes() {
    let o = koszul(&["class", "star:x=1,leaves=0,2", "--path", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["display"], "-t3*e[t1t2] + t1*e[t2t3]");
    let o = koszul(&["class", "witness:n=4,m=4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(koszul(&["class", "star:x=0,leaves=2", "--path", "3"]).status.code(), Some(2));
}

#[test]
fn graph_files_in_both_formats() {
    let dir = std::env::temp_dir().join(format!("koszul-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let text = dir.join("tri.txt");
    fs::write(&text, "a b\nb c\nc a\n").unwrap();
    let o = koszul(&["homology", text.to_str().unwrap(), "--full-mu"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1\t(1,1,1)\t2"));
    let json = dir.join("tri.json");
    let exported = koszul(&["homology", "--cycle", "3", "--mu", "0,0,0", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&exported)).unwrap();
    fs::write(&json, v["graph"].to_string()).unwrap();
    let o = koszul(&["homology", json.to_str().unwrap(), "--full-mu"]);
    assert_eq!(stdout(&o), "i\tmu\tdim\n0\t(1,1,1)\t0\n1\t(1,1,1)\t2\n");
    let broken = dir.join("broken.txt");
    fs::write(&broken, "a a\n").unwrap();
    assert_eq!(koszul(&["homology", broken.to_str().unwrap()]).status.code(), Some(2));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_paths_passes_and_is_byte_stable() {
    let a = koszul(&["verify", "paths", "--json", "--no-timing"]);
    let b = koszul(&["verify", "paths", "--json", "--no-timing"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["failed"], 0);
    assert!(v["elapsed_ms"].is_null());
}

#[test]
fn output_file_and_input_errors() {
    let out = std::env::temp_dir().join(format!("koszul-out-{}.tsv", std::process::id()));
    let o = koszul(&["verify", "kunneth", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().lines().skip(1).all(|l| l.ends_with("PASS")));
    fs::remove_file(&out).unwrap();
    assert_eq!(koszul(&["verify", "everything"]).status.code(), Some(2));
    assert_eq!(koszul(&["homology", "--cycle", "4", "--mu", "1,1"]).status.code(), Some(2));
    assert_eq!(koszul(&["homology", "--cycle", "4", "--field", "reals"]).status.code(), Some(2));
    assert_eq!(koszul(&["homology"]).status.code(), Some(2));
}
