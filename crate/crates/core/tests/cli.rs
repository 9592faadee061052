use std::path::Path;
use std::process::{Command, Output};

use polarity_core::io::{canonical_edge_list, from_graph6};
use polarity_core::PolarityGraph;
use serde_json::Value;

fn polarity(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polarity"))
        .args(args)
        .env_remove("PF_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_summary() {
    let out = polarity(&["build", "--q", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!((v["n"].as_u64(), v["edges"].as_u64(), v["loops"].as_u64()), (Some(21), Some(50), Some(5)));
}

#[test]
fn build_rejects_non_prime_power() {
    let out = polarity(&["build", "--q", "6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not a prime power"));
}

#[test]
fn build_with_explicit_modulus() {
    let out = polarity(&["build", "--q", "9", "--modulus", "3^2:1,0,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["field"], "3^2:1,0,1");
    // x^2 + 1 is reducible over GF(2)
    assert_eq!(polarity(&["build", "--modulus", "2^2:1,0,1"]).status.code(), Some(2));
}

#[test]
fn build_writes_graph_and_plane_files() {
    let dir = tempfile::tempdir().unwrap();
    let g6 = dir.path().join("er5.g6");
    let plane = dir.path().join("pg5.txt");
    let out = polarity(&["build", "--q", "5", "--out", path(&g6), "--export-plane", path(&plane)]);
    assert_eq!(out.status.code(), Some(0));
    let g = from_graph6(&std::fs::read_to_string(&g6).unwrap()).unwrap();
    let er = PolarityGraph::er(5).unwrap();
    assert_eq!(canonical_edge_list(&g), canonical_edge_list(er.graph()));
    let abs = std::fs::read_to_string(dir.path().join("er5.g6.absolute")).unwrap();
    assert_eq!(abs.lines().count(), 6);

    // rebuild from the exported plane plus an explicit polarity file
    let pol = dir.path().join("pol.txt");
    let f = polarity_core::Field::with_order(5).unwrap();
    let p = polarity_core::Plane::pg(&f);
    std::fs::write(&pol, polarity_core::plane::orthogonal_polarity(&p).unwrap().export()).unwrap();
    let el = dir.path().join("er5.txt");
    let out = polarity(&[
        "build", "--plane", path(&plane), "--polarity", path(&pol), "--out", path(&el), "--format", "edgelist",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["edges"], 90);
}

#[test]
fn missing_input_file_is_an_io_error() {
    let out = polarity(&["verify", "--cert", "/nonexistent/c.json", "--graph", "/nonexistent/g"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn dense_is_deterministic() {
    let args = ["dense", "--q", "8", "--m", "5", "--trials", "500", "--seed", "42"];
    let a = polarity(&args);
    let b = polarity(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dense_exhaustive_and_errors() {
    let out = polarity(&["dense", "--q", "4", "--m", "3", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["method"], "exhaustive");
    assert_eq!(polarity(&["dense", "--q", "8", "--m", "10"]).status.code(), Some(2));
    let out = polarity(&["dense", "--q", "7", "--m", "4", "--exhaustive", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(4));
    let env = Command::new(env!("CARGO_BIN_EXE_polarity"))
        .args(["dense", "--q", "7", "--m", "4", "--exhaustive"])
        .env("PF_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(4));
}

#[test]
fn turan_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let graph = dir.path().join("g.txt");
    let out = polarity(&[
        "turan", "--q", "8", "--construction", "corollary", "--seed", "1", "--cert", path(&cert),
        "--graph", path(&graph), "--format", "edgelist",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = polarity(&["verify", "--cert", path(&cert), "--graph", path(&graph)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["status"], "pass");

    // a graph that does not match the certificate
    let other = dir.path().join("other.g6");
    polarity(&["turan", "--q", "8", "--construction", "mersenne", "--graph", path(&other)]);
    let v = polarity(&["verify", "--cert", path(&cert), "--graph", path(&other)]);
    assert_eq!(v.status.code(), Some(5));
    assert_eq!(json(&v)["status"], "fail");
}

#[test]
fn turan_mersenne() {
    let out = polarity(&["turan", "--q", "8", "--construction", "mersenne"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["n"], 54);
    assert_eq!(v["beats_abl"], true);
    assert!(v["edges"].as_u64().unwrap() >= 203);
    assert_eq!(polarity(&["turan", "--q", "16", "--construction", "mersenne"]).status.code(), Some(2));
}

#[test]
fn table_rows() {
    let out = polarity(&["table", "--q", "2..13", "--trials", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header[0], "q");
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    // prime powers 2,3,4,5,7,8,9,11,13, three constructions each
    assert_eq!(rows.len(), 27);
    let find = |q: &str, c: &str| rows.iter().find(|r| &r[0] == q && &r[1] == c).unwrap().clone();
    assert!(find("8", "mersenne")[3].parse::<u64>().unwrap() >= 203);
    assert_eq!(&find("3", "corollary")[2], "4");
    assert_eq!(&find("3", "corollary")[7], "4");
    assert!(find("5", "mersenne")[9].starts_with("skipped"));
}
