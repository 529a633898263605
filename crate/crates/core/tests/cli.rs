mod common;

use std::fs;
use std::path::Path;

use common::data_dir;
use lincorr::bounds::{solve_h_in_req, OldBound};
use lincorr::cli::main_with;

struct Run {
    code: i32,
    out: String,
    err: String,
    raw: Vec<u8>,
}

fn run(args: &[&str], stdin: &[u8]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut input = stdin;
    let code = main_with(
        std::iter::once("lincorr").chain(args.iter().copied()),
        &mut input,
        &mut out,
        &mut err,
    );
    Run {
        code,
        out: String::from_utf8_lossy(&out).into_owned(),
        err: String::from_utf8_lossy(&err).into_owned(),
        raw: out,
    }
}

fn write_code(dir: &Path, name: &str) -> String {
    let text = fs::read_to_string(data_dir().join("starter.jsonl")).unwrap();
    let line = text
        .lines()
        .find(|l| l.contains(&format!("\"name\":\"{name}\"")))
        .unwrap();
    let line = line.replace("\"wd/", &format!("\"{}/wd/", data_dir().display()));
    let p = dir.join(format!("{name}.json"));
    fs::write(&p, line).unwrap();
    p.display().to_string()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn solve_prints_requirement() {
    let dir = tempfile::tempdir().unwrap();
    let golay = write_code(dir.path(), "golay23");
    let r = run(&["solve", "--code", &golay, "--bound", "old", "--h-out1", "0.999"], b"");
    assert_eq!(r.code, 0, "{}", r.err);
    let want = solve_h_in_req(&OldBound::new(23, 12, 7).unwrap(), 0.999).unwrap().h_in.value();
    assert_eq!(field(&r.out, "h_in_req"), format!("{want:.9}"));
    assert_eq!(field(&r.out, "below_bracket"), "false");
}

#[test]
fn frontier_csv_is_deterministic() {
    let cat = data_dir().join("starter.jsonl");
    let cat = cat.to_str().unwrap();
    let args = ["frontier", "--catalog", cat, "--bound", "new", "--h-out1", "0.999", "--format", "csv"];
    let a = run(&args, b"");
    let b = run(&args, b"");
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    let mut lines = a.out.lines();
    assert_eq!(lines.next(), Some("name,n,k,d,rate,h_in_req,bound,efficiency_at_req"));
    let mut last_req = 0.0;
    for l in lines {
        let cols: Vec<&str> = l.split(',').collect();
        assert_eq!(cols.len(), 8);
        let req: f64 = cols[5].parse().unwrap();
        assert!(req > last_req);
        assert_eq!(cols[5].split('.').nth(1).unwrap().len(), 9);
        last_req = req;
    }
    assert!(a.err.contains("skipped rm3_8"));

    let cyc = run(&["frontier", "--catalog", cat, "--cyclic-only", "--format", "json"], b"");
    assert_eq!(cyc.code, 0);
    assert!(!cyc.out.contains("rm1_9"));
    assert!(cyc.out.starts_with("[{\"name\":"));
}

#[test]
fn select_and_domain_errors() {
    let cat = data_dir().join("starter.jsonl");
    let cat = cat.to_str().unwrap();
    let r = run(&["select", "--catalog", cat, "--h-in", "0.1"], b"");
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(field(&r.out, "name"), "bch511_31");
    assert_eq!(field(&r.out, "efficiency"), "0.606653595");
    let r = run(&["select", "--catalog", cat, "--h-in", "0.01"], b"");
    assert_eq!(r.code, 1);
    assert!(r.err.contains("no usable corrector"));
}

#[test]
fn usage_and_io_errors() {
    assert_eq!(run(&["solve"], b"").code, 2);
    assert_eq!(run(&["solve", "--code", "x.json", "--bogus"], b"").code, 2);
    assert_eq!(run(&["solve", "--code", "x.json", "--h-out1", "1.5"], b"").code, 2);
    assert_eq!(run(&["bound", "--code", "x.json", "--h-in", "0"], b"").code, 2);
    let r = run(&["solve", "--code", "/nonexistent/code.json"], b"");
    assert_eq!(r.code, 3);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"name":"b","n":3,"k":2,"construction":{"generator":["c","c"]}}"#).unwrap();
    assert_eq!(run(&["wd", "--code", bad.to_str().unwrap()], b"").code, 3);
}

#[test]
fn bound_reports_appropriateness() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_code(dir.path(), "golay23_even");
    let r = run(&["bound", "--code", &c, "--bound", "old", "--h-in", "0.8"], b"");
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(field(&r.out, "appropriate"), "true");
    let eff: f64 = field(&r.out, "efficiency").parse().unwrap();
    assert!((eff - 0.59779).abs() < 5e-6);
    let r = run(&["bound", "--code", &c, "--bound", "old", "--h-in", "0.5"], b"");
    assert_eq!(field(&r.out, "appropriate"), "false");
    assert!(!r.out.contains("efficiency"));
}

#[test]
fn apply_stream_and_stats() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_code(dir.path(), "rm1_3");
    let r = run(&["apply", "--code", &c], &[0xa5; 100]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert_eq!(r.raw.len(), 50);
    assert_eq!(r.err.trim(), r#"{"blocks":100,"in_bits":800,"out_bits":400,"dropped_bits":0}"#);
    let out = dir.path().join("o.bin");
    let r = run(&["apply", "--code", &c, "--out", out.to_str().unwrap()], &[0xa5; 13]);
    assert_eq!(r.code, 0);
    assert!(r.raw.is_empty());
    assert_eq!(fs::read(&out).unwrap().len(), 7);
}

#[test]
fn verify_reports_soundness() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_code(dir.path(), "hamming7_4");
    let p = dir.path().join("p.txt");
    fs::write(&p, "0.3\n0.6\n0.25\n0.5\n0.7\n0.35\n0.4\n").unwrap();
    let r = run(&["verify", "--code", &c, "--probs", p.to_str().unwrap()], b"");
    assert_eq!(r.code, 0, "{}", r.err);
    let exact: f64 = field(&r.out, "exact").parse().unwrap();
    let new: f64 = field(&r.out, "new_bound").parse().unwrap();
    let old: f64 = field(&r.out, "old_bound").parse().unwrap();
    assert!(exact >= new && new >= old);
    assert_eq!(field(&r.out, "sound"), "true");
    assert_eq!(field(&r.out, "most_probable_coset"), "true");
    fs::write(&p, "0.3\n").unwrap();
    assert_eq!(run(&["verify", "--code", &c, "--probs", p.to_str().unwrap()], b"").code, 2);
}

#[test]
fn wd_formats() {
    let dir = tempfile::tempdir().unwrap();
    let c = write_code(dir.path(), "hamming7_4");
    let r = run(&["wd", "--code", &c, "--format", "json"], b"");
    assert_eq!(r.out.trim(), r#"{"n":7,"k":4,"source":"attached","wd":[[0,"1"],[3,"7"],[4,"7"],[7,"1"]]}"#);
    let r = run(&["wd", "--code", &c, "--format", "csv"], b"");
    assert_eq!(r.out, "weight,count\n0,1\n3,7\n4,7\n7,1\n");
}
