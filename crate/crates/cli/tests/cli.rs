use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_liftkit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn liftkit")
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn liftkit");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

struct Scratch(PathBuf);

impl Scratch {
    fn new(name: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("liftkit-cli-{name}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn exists(p: &str) -> bool {
    Path::new(p).exists()
}

#[test]
fn toric_product_pipeline_is_torsion_free() {
    let gen = run(&["gen", "toric", "--L", "4"]);
    assert!(gen.status.success());
    let lift = run_stdin(&["lift", "--method", "product"], &gen.stdout);
    assert!(lift.status.success(), "{}", String::from_utf8_lossy(&lift.stderr));
    let report: Value = serde_json::from_slice(&lift.stderr).unwrap();
    assert_eq!(report["parity_ok"], true);
    assert_eq!(report["admissible"], true);
    assert_eq!(report["sparsity_in"], report["sparsity_out"]);
    let hom = run_stdin(&["homology", "--ring", "z"], &lift.stdout);
    assert!(hom.status.success());
    let h = json(&hom);
    assert_eq!(h["torsion_free"], true);
    assert_eq!(h["free_ranks"], serde_json::json!([1, 2, 1]));
}

#[test]
fn odd_toric_product_lift_keeps_the_naive_torsion() {
    let gen = run(&["gen", "toric", "--L", "3"]);
    let lift = run_stdin(&["lift", "--method", "product"], &gen.stdout);
    assert!(lift.status.success());
    let h = json(&run_stdin(&["homology"], &lift.stdout));
    assert_eq!(h["torsion_free"], false);
    let general = run_stdin(&["lift", "--method", "general"], &gen.stdout);
    let h = json(&run_stdin(&["homology"], &general.stdout));
    assert_eq!(h["torsion_free"], true);
}

#[test]
fn product_from_factor_files() {
    let s = Scratch::new("factors");
    let c = String::from_utf8(run(&["gen", "cycle", "--m", "2"]).stdout).unwrap();
    let a = s.file("a", &c);
    let out = s.path("p.cz");
    let r = run(&["lift", "--method", "product", "--a", &a, "--b", &a, "--out", &out]);
    assert!(r.status.success());
    assert!(exists(&out));
    let report = json(&r);
    assert_eq!(report["command"], "lift");
    assert_eq!(report["method"], "product");
    let v = run(&["validate", &out]);
    assert!(v.status.success());
}

#[test]
fn tree_has_empty_basis() {
    let s = Scratch::new("tree");
    let tree = s.file("tree", "graph 4 3\n0 1\n1 2\n1 3\n");
    let r = run(&["cycle-basis", &tree]);
    assert!(r.status.success());
    assert_eq!(String::from_utf8(r.stdout).unwrap(), "basis 0\ncertificates\n");
}

#[test]
fn engineered_two_torsion_has_no_sparse_lift() {
    let s = Scratch::new("torsion");
    let c = s.file("c", "complex2 2\nf2 1 1\nf2 1 1\n0 0\n");
    let d1 = s.file("d1", "int 1 1\n0 0 2\n");
    let r = run(&["lift", "--method", "sparse", "--d1", &d1, &c]);
    assert_eq!(r.status.code(), Some(1));
    let err = String::from_utf8(r.stderr).unwrap();
    assert!(err.contains("no sparse lift") && err.contains("2-cell 0"), "{err}");
    let ok = run(&["lift", "--method", "sparse", &c]);
    assert!(ok.status.success());
}

#[test]
fn reports_carry_schema_and_seed() {
    let toric = run(&["gen", "toric", "--L", "2"]).stdout;
    for args in [
        &["sr"][..],
        &["distance", "--side", "cohomology"],
        &["homology", "--ring", "f2"],
        &["lu-probe"],
    ] {
        let r = run_stdin(args, &toric);
        assert!(r.status.success(), "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
        let v = json(&r);
        assert_eq!(v["schema_version"], liftkit_cli::report_schema_version());
        assert_eq!(v["command"], args[0]);
    }
    let triangle = run(&["gen", "cycle", "--m", "3"]).stdout;
    let v = json(&run_stdin(&["minor-gcd", "--trials", "4", "--seed", "9"], &triangle));
    assert_eq!(v["schema_version"], liftkit_cli::report_schema_version());
    assert_eq!(v["seed"], 9);
    assert_eq!(v["gcd"], "2");
    let r = run_stdin(&["minor-gcd"], &toric);
    assert_eq!(r.status.code(), Some(1));
    let sr = json(&run_stdin(&["sr"], &toric));
    assert_eq!(sr["sr"], "1/2");
    assert_eq!(sr["d_hom"], 2);
}

#[test]
fn reruns_are_byte_identical() {
    let graph = run(&["gen", "cubic", "--v", "64", "--seed", "5"]);
    assert!(graph.status.success());
    let cb = |seed: &str| run_stdin(&["cycle-basis", "--stats", "--verify", "--seed", seed], &graph.stdout).stdout;
    assert_eq!(cb("3"), cb("3"));
    assert_eq!(graph.stdout, run(&["gen", "cubic", "--v", "64", "--seed", "5"]).stdout);
    let mc = || run(&["mc-push", "--k", "1", "--n", "2", "--budget-samples", "500", "--seed", "4"]).stdout;
    assert_eq!(mc(), mc());
    let lifted = run_stdin(&["lift", "--method", "product"], &run(&["gen", "toric", "--L", "2"]).stdout).stdout;
    let sk = || run_stdin(&["skeleton", "--stage", "double", "--seed", "2"], &lifted).stdout;
    let first = sk();
    assert_eq!(first, sk());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["stage"], "double");
}

#[test]
fn skeleton_dot_output() {
    let lifted = run_stdin(&["lift", "--method", "product"], &run(&["gen", "toric", "--L", "2"]).stdout).stdout;
    let r = run_stdin(&["skeleton", "--stage", "x", "--report", "dot"], &lifted);
    assert!(r.status.success());
    assert!(String::from_utf8(r.stdout).unwrap().starts_with("graph"));
}

#[test]
fn malformed_input_exits_2_with_line() {
    let s = Scratch::new("bad");
    let bad = s.file("bad", "complex2 1\nf2 2 2\n0 0\n0 x\n");
    let r = run(&["validate", &bad]);
    assert_eq!(r.status.code(), Some(2));
    let err = String::from_utf8(r.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
    let r = run(&["homology", &s.path("missing")]);
    assert_eq!(r.status.code(), Some(2));
    let r = run(&["lift"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn validate_rejects_noncommuting_boundaries() {
    let s = Scratch::new("noncomm");
    let c = s.file("c", "complex2 2\nf2 1 1\n0 0\nf2 1 1\n0 0\n");
    let r = run(&["validate", &c]);
    assert_eq!(r.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let r = run(&["--help"]);
    assert!(r.status.success());
    assert!(String::from_utf8(r.stdout).unwrap().contains("cycle-basis"));
}
