use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn dipath(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dipath"));
    cmd.args(args).env_remove("DIPATH_LIMITS");
    cmd
}

fn run(args: &[&str]) -> Output {
    dipath(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn error_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)))
}

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.0.path().join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn gen(&self, name: &str, args: &[&str]) -> PathBuf {
        let mut full = vec!["gen"];
        full.extend_from_slice(args);
        let out = run(&full);
        assert_eq!(code(&out), 0);
        self.write(name, std::str::from_utf8(&out.stdout).unwrap())
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn verify(graph: &Path, cert: &Path) -> (i32, Value) {
    let out = run(&["verify", "-i", s(graph), "-c", s(cert)]);
    (code(&out), json(&out))
}

#[test]
fn dpw_of_cycle() {
    let t = Scratch::new();
    let c3 = t.gen("c3.el", &["cycle", "3"]);
    let out = run(&["dpw", "-i", s(&c3)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["dpw"], 1);
    let cert = t.write("dpw.json", &v.to_string());
    assert_eq!(verify(&c3, &cert).0, 0);
}

#[test]
fn duality_sides_and_exit_codes() {
    let t = Scratch::new();
    let c3 = t.gen("c3.el", &["cycle", "3"]);
    let out = run(&["duality", "-i", s(&c3), "-k", "2", "-w", "2"]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["kind"], "diblockage");
    let cert = t.write("block.json", &v.to_string());
    assert_eq!(verify(&c3, &cert), (0, serde_json::json!({"kind": "diblockage", "valid": true})));

    let out = run(&["duality", "-i", s(&c3), "-k", "2", "-w", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["kind"], "path");
    let cert = t.write("path.json", &v.to_string());
    assert_eq!(verify(&c3, &cert).0, 0);
}

#[test]
fn tampered_certificates_are_rejected() {
    let t = Scratch::new();
    let c3 = t.gen("c3.el", &["cycle", "3"]);
    let mut v = json(&run(&["duality", "-i", s(&c3), "-k", "2", "-w", "2"]));
    // flip (∅, V) from the plus side to the minus side
    let plus = v["plus"].as_array_mut().unwrap();
    let at = plus.iter().position(|s| s["A"].as_array().unwrap().is_empty()).unwrap();
    let moved = plus.remove(at);
    v["minus"].as_array_mut().unwrap().push(moved);
    let cert = t.write("flipped.json", &v.to_string());
    let (c, report) = verify(&c3, &cert);
    assert_eq!(c, 1);
    assert_eq!(report["valid"], false);

    let mut v = json(&run(&["dpw", "-i", s(&c3)]));
    v["dpw"] = 0.into();
    assert_eq!(verify(&c3, &t.write("low.json", &v.to_string())).0, 1);

    let bk3 = t.gen("bk3.el", &["bidirected-complete", "3"]);
    let f = t.write("f.el", "3\n0 1\n1 2\n");
    let mut v = json(&run(&["embed", "-i", s(&bk3), "-f", s(&f)]));
    v["paths"]["2"] = serde_json::json!([1]);
    let (c, report) = verify(&bk3, &t.write("model.json", &v.to_string()));
    assert_eq!(c, 1);
    assert!(report["reason"].as_str().unwrap().starts_with("disjointness"));
}

#[test]
fn every_emitted_certificate_verifies() {
    let t = Scratch::new();
    let graphs = [
        t.gen("bk3.el", &["bidirected-complete", "3"]),
        t.gen("bp4.el", &["bidirected-path", "4"]),
        t.gen("rand.el", &["random", "5", "--p", "0.5", "--seed", "3"]),
        t.gen("t5.el", &["tournament", "5", "--seed", "1"]),
    ];
    let f = t.write("f.el", "2\n0 1\n");
    let mut checked = 0;
    for g in &graphs {
        let dpw = json(&run(&["dpw", "-i", s(g)]))["dpw"].as_u64().unwrap();
        let bound = (dpw + 2).to_string();
        let mut outputs = vec![
            run(&["dpw", "-i", s(g)]),
            run(&["linked", "-i", s(g), "-k", &bound, "-w", &bound]),
            run(&["linked", "-i", s(g), "-k", &bound, "-w", &bound, "--subdivide"]),
        ];
        for (k, w) in [(1, 1), (1, 2), (2, 2), (2, 3), (3, 3)] {
            outputs.push(run(&["duality", "-i", s(g), "-k", &k.to_string(), "-w", &w.to_string()]));
        }
        if dpw >= 1 {
            outputs.push(run(&["embed", "-i", s(g), "-f", s(&f)]));
        }
        for (i, out) in outputs.iter().enumerate() {
            assert!(matches!(code(out), 0 | 3), "{}", String::from_utf8_lossy(&out.stderr));
            let cert = t.write(&format!("cert{i}.json"), std::str::from_utf8(&out.stdout).unwrap());
            let (c, report) = verify(g, &cert);
            assert_eq!(c, 0, "{report}");
            checked += 1;
        }
    }
    assert!(checked >= 30);
}

#[test]
fn fuzz_is_reproducible() {
    let t = Scratch::new();
    let out_file = t.0.path().join("cx.el");
    let args = |workers: &'static str| {
        vec!["fuzz", "--n-max", "5", "--iters", "40", "--seed", "9", "--workers", workers, "--out", s(&out_file)]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>()
    };
    let go = |a: Vec<String>| dipath(&a.iter().map(String::as_str).collect::<Vec<_>>()).output().unwrap();
    let (a, b, c) = (go(args("1")), go(args("1")), go(args("4")));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    assert_eq!(json(&a)["status"], "ok");
}

#[test]
fn usage_and_guard_errors() {
    let t = Scratch::new();
    let out = run(&["frobnicate"]);
    assert_eq!(code(&out), 4);
    assert_eq!(error_json(&out)["error"], "usage");

    let bad = t.write("bad.el", "3\n0 0\n");
    let out = run(&["dpw", "-i", s(&bad)]);
    assert_eq!(code(&out), 4);
    assert_eq!(error_json(&out)["error"], "loop");

    let c3 = t.gen("c3.el", &["cycle", "3"]);
    let out = run(&["duality", "-i", s(&c3), "-k", "3", "-w", "2"]);
    assert_eq!((code(&out), error_json(&out)["error"].clone()), (4, "invalid_params".into()));

    let guarded = dipath(&["duality", "-i", s(&c3), "-k", "2", "-w", "2"])
        .env("DIPATH_LIMITS", "enumerate_vertices=2")
        .output()
        .unwrap();
    assert_eq!(code(&guarded), 5);
    assert_eq!(error_json(&guarded)["error"], "size_guard");

    let big = t.gen("big.el", &["random", "21", "--seed", "1"]);
    assert_eq!(code(&run(&["dpw", "-i", s(&big)])), 5);
    let lifted = dipath(&["dpw", "-i", s(&big)]).env("DIPATH_LIMITS", "dpw_vertices=22").output().unwrap();
    assert_eq!(code(&lifted), 0);
}

#[test]
fn hidden_oracle_and_dot_output() {
    let t = Scratch::new();
    let bk3 = t.gen("bk3.el", &["bidirected-complete", "3"]);
    assert_eq!(json(&run(&["oracle", "dpw", "-i", s(&bk3)]))["dpw"], 2);
    let c3 = t.gen("c3.el", &["cycle", "3"]);
    assert_eq!(json(&run(&["oracle", "spath", "-i", s(&c3), "-k", "2", "-w", "3"]))["exists"], true);
    let dot = run(&["gen", "--dot", "cycle", "3"]);
    assert!(String::from_utf8_lossy(&dot.stdout).contains("2 -> 0;"));
    let help = String::from_utf8_lossy(&run(&["--help"]).stdout).to_string();
    assert!(help.contains("  duality") && !help.contains("  oracle"));
}

#[test]
fn fuzz_writes_a_minimized_counterexample() {
    // a tiny separation guard makes every non-trivial instance fail its checks
    let t = Scratch::new();
    let out_file = t.0.path().join("cx.el");
    let out = dipath(&["fuzz", "--n-max", "5", "--iters", "20", "--seed", "3", "--out", s(&out_file)])
        .env("DIPATH_LIMITS", "separations=6")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    let report = json(&out);
    assert_eq!(report["status"], "counterexample");
    assert!(report["minimized"]["n"].as_u64().unwrap() <= report["original"]["n"].as_u64().unwrap());
    let text = std::fs::read_to_string(&out_file).unwrap();
    assert!(text.starts_with("# fuzz counterexample"));
    let n: usize = text.lines().find(|l| !l.starts_with('#')).unwrap().trim().parse().unwrap();
    assert_eq!(n as u64, report["minimized"]["n"].as_u64().unwrap());
}
