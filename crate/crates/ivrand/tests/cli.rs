use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ivrand(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivrand")).args(args).output().expect("spawn ivrand")
}

fn ok(args: &[&str]) -> String {
    let out = ivrand(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn f(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn local_examples() {
    assert_eq!(ok(&["local", "--interval", "2/5", "7/10", "--gamble", "1", "0"]), "upper 7/10  lower 2/5\n");
    assert_eq!(ok(&["local", "--interval", "1/2", "1/2", "--gamble", "1", "1"]), "upper 1  lower 1\n");
    assert_eq!(ok(&["local", "--interval", "0", "1", "--gamble", "-1", "2"]), "upper 2  lower -1\n");
    let bad = ivrand(&["local", "--interval", "1/x", "1", "--gamble", "1", "0"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
    assert_eq!(ivrand(&["local", "--interval", "3/4", "1/4", "--gamble", "1", "0"]).status.code(), Some(2));
}

#[test]
fn cutprob_examples() {
    assert_eq!(ok(&["cutprob", "--fs", &f("fair.fs"), "--cut", "1,00"]), "3/4\n");
    assert_eq!(ok(&["cutprob", "--fs", &f("wide.fs"), "--cut", "10", "--lower"]), "3/25\n");
    assert_eq!(ok(&["cutprob", "--fs", &f("wide.fs"), "--cut", "10"]), "21/50\n");
    assert_eq!(ok(&["cutprob", "--fs", &f("fair.fs"), "--cut", "11", "--cond", "1"]), "1/2\n");
    assert_eq!(ivrand(&["cutprob", "--fs", &f("fair.fs"), "--cut", "1,11"]).status.code(), Some(2));
    assert_eq!(ivrand(&["cutprob", "--fs", &f("missing.fs"), "--cut", "1"]).status.code(), Some(2));
}

#[test]
fn convert_to_test_of_doubler() {
    let out = ok(&["convert", "to-test", "--process", &f("doubler.proc"), "--fs", &f("fair.fs")]);
    assert!(out.contains("# all budgets pass\n"));
    assert!(out.ends_with("levels: 2\ndepth: 2\nlevel 0 1\nlevel 1 11\n"), "{out}");
}

#[test]
fn convert_to_test_rejects_non_supermartingale() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.proc");
    std::fs::write(&p, "depth: 1\n@ 1\n0 0\n1 3\n").unwrap();
    let out = ivrand(&["convert", "to-test", "--process", p.to_str().unwrap(), "--fs", &f("fair.fs")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("@"));
}

#[test]
fn convert_to_martingale_of_ones() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("w.proc");
    let out = ok(&[
        "convert", "to-martingale", "--test", &f("ones.test"), "--fs", &f("fair.fs"), "--levels", "1", "--out",
        dest.to_str().unwrap(),
    ]);
    assert!(out.contains("# root before normalization: 3/8\n"), "{out}");
    assert!(out.contains("# remainder bound at root: 1/2\n"));
    assert!(out.contains("# root after normalization: 1\n"));
    assert!(out.contains("# supermartingale check: pass\n"));
    let written = std::fs::read_to_string(&dest).unwrap();
    assert!(written.starts_with("depth: 4\n@ 1\n0 0\n1 3/4\n"), "{written}");
    assert!(written.contains("\n11 1\n"));
}

#[test]
fn convert_universal_of_two_ones_tests() {
    let out = ok(&["convert", "universal", "--fs", &f("fair.fs"), &f("ones.test"), &f("ones.test")]);
    assert!(out.contains("# all budgets pass\n"));
    assert!(out.ends_with("levels: 3\ndepth: 4\nlevel 0 11\nlevel 1 111\nlevel 2 1111\n"), "{out}");
}

#[test]
fn convert_schnorr_from_doubler() {
    let out = ok(&[
        "convert", "schnorr-from-martingale", "--process", &f("doubler.proc"), "--fs", &f("fair.fs"), "--rho",
        "table ; affine 1 0 1",
    ]);
    assert!(!out.contains("FAIL"));
    assert!(out.ends_with("tail: table 1 2 4 ; affine 1 4 1\nlevel 0 1\nlevel 1 11\n"), "{out}");
}

#[test]
fn sample_examples() {
    assert_eq!(ok(&["sample", "--fs", &f("point-one.fs"), "--selector", "mid", "--n", "4"]), "1111\n");
    let a = ok(&["sample", "--fs", &f("wide.fs"), "--selector", "uniform", "--n", "64", "--seed", "9"]);
    let b = ok(&["sample", "--fs", &f("wide.fs"), "--selector", "uniform", "--n", "64", "--seed", "9"]);
    assert_eq!(a, b);
    assert_eq!(a.trim().len(), 64);
    assert_eq!(ivrand(&["sample", "--fs", &f("fair.fs"), "--selector", "median", "--n", "4"]).status.code(), Some(2));
}

#[test]
fn analyze_doubling_on_ones() {
    let out = ok(&[
        "analyze", "--fs", &f("fair.fs"), "--seq", &f("ones.seq"), "--kelly", "1", "on-one", "--kelly", "0", "on-one",
        "--test", &f("ones.test"),
    ]);
    let expected = "\
#n\tbit\tkelly(1,on-one)\tkelly(0,on-one)\tmax_log2_capital\ttest_hits
0\t-\t1\t1\t0\t-
1\t1\t2\t1\t1\t0
2\t1\t4\t1\t2\t0,1
3\t1\t8\t1\t3\t0,1,2
4\t1\t16\t1\t4\t0,1,2,3
# summary\tmode=exact\tlength=4\tmax_log2_capital=4\tville_bound=1/16\tdeficiency=4
";
    assert_eq!(out, expected);
}

#[test]
fn analyze_streaming_matches_exact_columns() {
    let exact = ok(&["analyze", "--fs", &f("fair.fs"), "--seq", &f("ones.seq"), "--kelly", "1", "on-one"]);
    let streaming =
        ok(&["analyze", "--fs", &f("fair.fs"), "--seq", &f("ones.seq"), "--kelly", "1", "on-one", "--depth-cap", "2"]);
    assert!(exact.contains("mode=exact"));
    assert!(streaming.contains("mode=streaming"));
    let caps = |s: &str| s.lines().filter(|l| !l.starts_with('#')).map(|l| l.split('\t').nth(2).unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(caps(&exact), ["1", "2", "4", "8", "16"]);
    assert_eq!(caps(&streaming), ["2^0", "2^1", "2^2", "2^3", "2^4"]);
}

#[test]
fn analyze_rejects_bad_direction() {
    let out = ivrand(&["analyze", "--fs", &f("fair.fs"), "--seq", &f("ones.seq"), "--kelly", "1", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
}
