mod common;

use std::path::Path;
use std::process::{Command, Output};

use nilrym::cli::{cmd_analyze, cmd_catalog, parse_document, serialize, InputTolerances};
use nilrym::StructureTuple;
use tempfile::TempDir;

fn nilrym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilrym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn golden_a2() -> String {
    ((5f64.sqrt() - 1.0) / 2.0).to_string()
}

fn catalog_to(dir: &TempDir, file: &str, args: &[&str]) -> String {
    let path = dir.path().join(file);
    let mut all = vec!["catalog"];
    all.extend_from_slice(args);
    let p = path.to_str().unwrap().to_owned();
    all.extend_from_slice(&["--out", &p]);
    let o = nilrym(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    p
}

fn write(dir: &TempDir, file: &str, text: &str) -> String {
    let path = dir.path().join(file);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn heisenberg_document() {
    let text = cmd_catalog("heisenberg", &[], None).unwrap();
    let (doc, t) = parse_document(&text).unwrap();
    assert_eq!((doc.q, doc.p), (2, 1));
    assert_eq!(doc.matrices, vec![vec![0.0, 1.0, -1.0, 0.0]]);
    assert_eq!(t.matrix(0), &common::j());
    let o = nilrym(&["catalog", "heisenberg"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), text);
}

#[test]
fn certify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let a2 = format!("a2={}", golden_a2());
    let will = catalog_to(&dir, "will.json", &["will", "-p", &a2]);

    let o = nilrym(&["certify", &will, "--mode", "rym", "--tol", "1e-9"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("rym"));
    assert!(stdout(&o).contains("true"));

    let o = nilrym(&["certify", &will, "--mode", "rym", "--expect", "true"]);
    assert_eq!(code(&o), 0);
    let o = nilrym(&["certify", &will, "--mode", "ricci", "--expect", "false"]);
    assert_eq!(code(&o), 0);
    let o = nilrym(&["certify", &will, "--mode", "ricci", "--expect", "true"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("NOT met"));

    let o = nilrym(&["certify", &will, "--mode", "bogus"]);
    assert_eq!(code(&o), 2);
    let o = nilrym(&["certify", "/nonexistent/file.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let syntax = write(&dir, "syntax.json", "{\"q\": 2,\n \"p\": 1,\n \"matrices\": [[0, 1, -1, 0]\n");
    let o = nilrym(&["analyze", &syntax]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let schema = write(&dir, "schema.json", r#"{"q":2,"p":1,"matrices":[[0,1,2,-1,0,3,-2,-3,0]]}"#);
    let o = nilrym(&["analyze", &schema]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("matrix 0"));

    let skew = write(&dir, "skew.json", r#"{"q":2,"p":1,"matrices":[[0,1,1,0]]}"#);
    let o = nilrym(&["analyze", &skew]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0, 1)"));

    assert_eq!(code(&nilrym(&["catalog", "nope"])), 2);
    assert_eq!(code(&nilrym(&["catalog", "will", "-p", "a=abc"])), 2);
    assert_eq!(code(&nilrym(&["frobnicate"])), 2);
}

#[test]
fn analyze_is_deterministic_json() {
    let dir = TempDir::new().unwrap();
    let b = catalog_to(&dir, "b.json", &["b_basis"]);
    let first = nilrym(&["--json", "analyze", &b]);
    let second = nilrym(&["--json", "analyze", &b]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    let certs = v["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 4);
    for c in certs {
        assert!(c["residual"].is_number());
        assert!(c["tol"].is_number());
        assert_eq!(c["verdict"], true);
    }

    let report = cmd_analyze(Path::new(&b), 1e-9, InputTolerances::default()).unwrap();
    assert_eq!(report.to_json().as_bytes(), first.stdout.as_slice());
}

#[test]
fn flow_writes_csv_and_limit() {
    let dir = TempDir::new().unwrap();
    let mut jz = common::j_plus_zero();
    jz.set_label(Some("J+0".into()));
    let seed = write(&dir, "jz.json", &serialize(&jz, None));
    let csv = dir.path().join("trace.csv");
    let out = dir.path().join("limit.json");
    let o = nilrym(&[
        "flow",
        &seed,
        "--plain",
        "--csv",
        csv.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("outcome=degenerated"), "{text}");
    assert!(text.contains("heuristic"));
    let trace = std::fs::read_to_string(&csv).unwrap();
    assert!(trace.starts_with("step,norm_C,norm_mG,residual\n"));
    let (_, limit) = parse_document(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(limit.norm() < 1e-6 * jz.norm());

    let h = catalog_to(&dir, "h.json", &["heisenberg"]);
    let o = nilrym(&["--json", "flow", &seed, &h, "--group", "slq", "--plain", "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let flows = v["flows"].as_array().unwrap();
    assert_eq!(flows[0]["outcome"], "degenerated");
    assert_eq!(flows[1]["outcome"], "converged_minimal");
    assert!(dir.path().join("trace.0.csv").exists());
    assert!(dir.path().join("trace.1.csv").exists());
}

#[test]
fn tune_and_concat() {
    let o = nilrym(&["tune", "will", "--free", "a2", "--lo", "0.01", "--hi", "2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("a2=0.618033988"));
    let o = nilrym(&["tune", "will", "--free", "a2", "--lo", "1.5", "--hi", "2"]);
    assert_eq!(code(&o), 2);

    let dir = TempDir::new().unwrap();
    let h = catalog_to(&dir, "h.json", &["heisenberg"]);
    let b = catalog_to(&dir, "b.json", &["b_basis"]);
    let out = dir.path().join("hb.json");
    let o = nilrym(&["concat", &h, &b, "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let (_, t) = parse_document(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((t.q(), t.p()), (6, 3));
    assert_eq!(code(&nilrym(&["concat", &b, &h])), 2);
    assert_eq!(code(&nilrym(&["concat", &b, &h, "--pad"])), 0);
}

#[test]
fn round_trip_is_bit_exact() {
    let mut r = common::rng(31);
    for _ in 0..50 {
        let t: StructureTuple = common::random_shaped_tuple(&mut r, 7, 4);
        let back = parse_document(&serialize(&t, None)).unwrap().1;
        for (a, b) in t.matrices().iter().zip(back.matrices()) {
            for (x, y) in a.iter().zip(b.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
