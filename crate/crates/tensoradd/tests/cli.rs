//! Exit-code and round-trip tests for the command-line binary.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tensoradd"))
}

fn tmpdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tensoradd-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn gen(args: &[&str], out: &Path) {
    let status = bin()
        .arg("gen")
        .args(args)
        .arg("-o")
        .arg(out)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn verify_strassen_exits_zero() {
    let status = bin().arg("verify-strassen").status().unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn rank_exact_and_bound_only_exit_codes() {
    let dir = tmpdir("rank");
    let mu_q = dir.join("mu_q.json");
    gen(&["matmul", "2", "2", "2", "--field", "q"], &mu_q);
    // rationals: bounds only
    let status = bin().arg("rank").arg(&mu_q).status().unwrap();
    assert_eq!(status.code(), Some(3));
    let small = dir.join("small.json");
    gen(&["random", "2", "2", "2", "--field", "gf2", "--seed", "5"], &small);
    let status = bin().arg("rank").arg(&small).status().unwrap();
    assert_eq!(status.code(), Some(0));
    // oversize concise core
    let mu333 = dir.join("mu333.json");
    gen(&["matmul", "3", "3", "3", "--field", "gf2"], &mu333);
    let status = bin().arg("rank").arg(&mu333).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn additivity_exit_codes() {
    let dir = tmpdir("add");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    gen(&["random", "2", "2", "2", "--field", "gf2", "--seed", "5"], &a);
    gen(&["random", "1", "2", "2", "--field", "gf2", "--seed", "9"], &b);
    let status = bin().arg("additivity").arg(&a).arg(&b).status().unwrap();
    assert_eq!(status.code(), Some(0));
    // mismatched fields
    let c = dir.join("c.json");
    gen(&["random", "2", "2", "2", "--field", "gf3", "--seed", "5"], &c);
    let status = bin().arg("additivity").arg(&a).arg(&c).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn gen_round_trip_and_dirsum_split() {
    let dir = tmpdir("gen");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let sum = dir.join("sum.json");
    gen(&["random", "2", "2", "2", "--field", "gf2", "--seed", "1"], &a);
    gen(&["random", "1", "2", "2", "--field", "gf2", "--seed", "2"], &b);
    gen_dirsum(&a, &b, &sum);
    let f = tensoradd::io::TensorFile::read(&sum).unwrap();
    assert_eq!(f.dims, [3, 4, 4]);
    let split = f.split.unwrap();
    assert_eq!((split.a_prime, split.b_prime, split.c_prime), (2, 2, 2));
    // deterministic: same seed reproduces the same file
    let a2 = dir.join("a2.json");
    gen(&["random", "2", "2", "2", "--field", "gf2", "--seed", "1"], &a2);
    assert_eq!(
        std::fs::read_to_string(&a).unwrap(),
        std::fs::read_to_string(&a2).unwrap()
    );
}

fn gen_dirsum(a: &Path, b: &Path, out: &Path) {
    let status = bin()
        .arg("gen")
        .arg("dirsum")
        .arg(a)
        .arg(b)
        .arg("-o")
        .arg(out)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn classify_rejects_non_certifying_decomposition() {
    let dir = tmpdir("classify");
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    let sum = dir.join("sum.json");
    gen(&["random", "2", "2", "2", "--field", "gf2", "--seed", "5"], &a);
    gen(&["random", "1", "2", "2", "--field", "gf2", "--seed", "9"], &b);
    gen_dirsum(&a, &b, &sum);
    // a decomposition of the wrong tensor: a single unit term
    let decomp = dir.join("d.json");
    std::fs::write(
        &decomp,
        r#"{"field":{"kind":"gf","p":2},"dims":[3,4,4],
            "terms":[{"u":[1,0,0],"v":[1,0,0,0],"w":[1,0,0,0]}]}"#,
    )
    .unwrap();
    let status = bin()
        .arg("classify")
        .arg(&sum)
        .arg(&decomp)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn gen_hook_passes_hook_check() {
    let dir = tmpdir("hook");
    let h = dir.join("h.json");
    gen(
        &["hook", "2", "4", "4", "1", "2", "--field", "gf2", "--seed", "7"],
        &h,
    );
    let t = tensoradd::io::TensorFile::read(&h).unwrap().to_tensor().unwrap();
    let hook = tensoradd::tensor3::HookShape::coordinate(t.descriptor(), 4, 4, 1, 2);
    assert!(tensoradd::tensor3::is_hook_shaped(
        &t.slice_space(tensoradd::tensor3::Axis::A),
        &hook
    )
    .unwrap());
}

#[test]
fn peel_reports_mu222_flattening_bound() {
    let dir = tmpdir("peel");
    let mu = dir.join("mu.json");
    gen(&["matmul", "2", "2", "2", "--field", "gf2"], &mu);
    let out = bin().arg("peel").arg(&mu).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no rank-one slice"));
    assert!(text.contains("substitution lower bound: 4"));
}
