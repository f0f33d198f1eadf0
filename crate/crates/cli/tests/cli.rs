use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loewner")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_exit_codes() {
    assert_eq!(run(&["check", "sqrt", "--property", "monotone", "--order", "4"]).status.code(), Some(0));

    let out = run(&["check", "square", "--property", "monotone", "--order", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"]["outcome"], "fail");
    assert_eq!(v["verdict"]["witness"]["nodes"].as_array().unwrap().len(), 2);

    let out = run(&["check", "nosuchfn"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sqrt"));

    assert_eq!(run(&["check", "sqrt", "--order", "0"]).status.code(), Some(2));
    assert_eq!(run(&["check", "sqrt", "--interval", "-1,2"]).status.code(), Some(2));
    assert_eq!(run(&["check", "sqrt", "--bogus-flag"]).status.code(), Some(2));
}

#[test]
fn check_is_reproducible_and_seeded() {
    let a = run(&["check", "power:0.5", "--order", "3", "--seed", "9", "--trials", "20"]);
    let b = run(&["check", "power:0.5", "--order", "3", "--seed", "9", "--trials", "20"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["verdict"]["trials"], 20);
}

#[test]
fn fit_and_synth_round_trip() {
    let dir = TempDir::new().unwrap();
    let mut csv = String::from("t,f\n");
    for i in 0..60 {
        let t = 1e-3 * 10f64.powf(6.0 * i as f64 / 59.0);
        csv.push_str(&format!("{t},{}\n", 0.5 * (1.0 + t)));
    }
    let samples = write(dir.path(), "arith.csv", &csv);
    let out = run(&["fit", s(&samples)]);
    assert_eq!(out.status.code(), Some(0));
    let atoms = json(&out)["atoms"].as_array().unwrap().clone();
    assert_eq!(atoms.len(), 2);
    for a in &atoms {
        assert!((a["w"].as_f64().unwrap() - 0.5).abs() < 1e-8);
    }

    let delta = write(dir.path(), "delta.json", r#"{"atoms":[{"lambda":1.0,"w":1.0}]}"#);
    let synth = dir.path().join("synth.csv");
    assert_eq!(run(&["synth", s(&delta), "--out", s(&synth)]).status.code(), Some(0));
    let back = json(&run(&["fit", s(&synth)]));
    let atoms = back["atoms"].as_array().unwrap();
    assert_eq!(atoms.len(), 1);
    assert_eq!(atoms[0]["lambda"], 1.0);
    assert!((atoms[0]["w"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn mean_commands() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.json", r#"{"n":2,"entries":[[[2,0],[1,0]],[[1,0],[3,0]]]}"#);
    let b = write(dir.path(), "b.csv", "1,0\n0,5\n");
    let out = run(&["mean", s(&a), s(&b), "--spec", "arithmetic"]);
    assert_eq!(out.status.code(), Some(0));
    let m = json(&out);
    assert_eq!(m["entries"][0][0][0], 1.5);
    assert_eq!(m["entries"][0][1][0], 0.5);
    assert_eq!(m["entries"][1][1][0], 4.0);

    assert_eq!(run(&["mean", s(&a), s(&b), "--spec", "harmonic"]).status.code(), Some(0));
    let spec = write(dir.path(), "spec.json", r#"{"mass0":0.5,"massInf":0.5}"#);
    let out = run(&["mean", s(&a), s(&b), "--spec", s(&spec)]);
    assert_eq!(json(&out)["entries"][1][1][0], 4.0);
    assert_eq!(run(&["mean", s(&a), s(&b), "--spec", "nonsense"]).status.code(), Some(2));

    let neg = write(dir.path(), "neg.csv", "1,0\n0,-1\n");
    assert_eq!(run(&["mean", s(&a), s(&neg)]).status.code(), Some(2));
}

#[test]
fn corrupted_matrix_reports_location() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.csv", "1,0\n0,1\n");
    let bad = write(dir.path(), "bad.csv", "1,2\n2,x\n");
    let out = run(&["mean", s(&a), s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.csv:2"), "{err}");

    let trunc = write(dir.path(), "trunc.json", "{\"n\": 2,\n \"entries\": [[[1,0]]");
    let out = run(&["mean", s(&a), s(&trunc)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trunc.json:"));
}

#[test]
fn envelope_and_caratheodory() {
    let dir = TempDir::new().unwrap();
    let g = write(dir.path(), "g.csv", "x,y\n0,0\n0.5,-1\n1,0\n");
    let out = run(&["envelope", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let ys: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(ys, vec![0.0, 0.0, 0.0]);

    let square = write(dir.path(), "sq.json", r#"{"dim":2,"vertices":[[0,0],[1,0],[1,1],[0,1]]}"#);
    let out = run(&["caratheodory", s(&square), "0.3,0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let w = json(&out)["weights"].as_array().unwrap().clone();
    assert!(w.len() <= 3);
    let (mut x, mut y, mut total) = (0.0, 0.0, 0.0);
    let verts = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    for e in &w {
        let (i, wi) = (e["vertex"].as_u64().unwrap() as usize, e["weight"].as_f64().unwrap());
        x += wi * verts[i][0];
        y += wi * verts[i][1];
        total += wi;
    }
    assert!((x - 0.3).abs() < 1e-9 && (y - 0.6).abs() < 1e-9 && (total - 1.0).abs() < 1e-12);

    let out = run(&["caratheodory", s(&square), "1.5,0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let cert = json(&out);
    let normal: Vec<f64> = cert["normal"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let offset = cert["offset"].as_f64().unwrap();
    assert!(normal[0] * 1.5 + normal[1] * 0.5 > offset);
}

#[test]
fn smoke_report_is_fast() {
    let start = std::time::Instant::now();
    let out = run(&["report", "--trials", "1"]);
    assert!(start.elapsed().as_secs_f64() < 10.0);
    let code = out.status.code().unwrap();
    assert!(code == 0 || code == 1, "exit {code}");
    assert_eq!(json(&out)["records"].as_array().unwrap().len(), 11);
    assert_eq!(run(&["report", "--trials", "0"]).status.code(), Some(2));
}
