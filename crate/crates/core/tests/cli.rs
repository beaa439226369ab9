use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermat-ns")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn invariants_text_and_json() {
    let o = run(&["invariants", "7"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("b2      187"));
    assert!(text.contains("rho     91"));

    let o = run(&["invariants", "11", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rho"], 271);
    assert_eq!(v["b2"], 911);
}

#[test]
fn gram_then_disc() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g5.txt");
    let o = run(&["gram", "--degree", "5", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["disc", "--matrix", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("244140625"));
    assert_eq!(lines.next(), Some("5^12"));
}

#[test]
fn cover_and_line_search() {
    let o = run(&["find-cover", "89"]);
    assert_eq!(stdout(&o).trim(), "m=89 r=16 q=1423 p=1423 n=1");

    let a = run(&["find-line", "--degree", "13", "--seed", "3"]);
    let b = run(&["find-line", "--degree", "13", "--seed", "3"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).starts_with("f "));
}

#[test]
fn verify_lemma_passes() {
    let o = run(&["verify-lemma", "--degree", "6"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
    assert!(!stdout(&o).contains("MISMATCH"));
}

#[test]
fn certify_writes_replayable_json() {
    let dir = tempfile::tempdir().unwrap();
    let table = concat!(env!("CARGO_MANIFEST_DIR"), "/data/table.tsv");
    let mut outs = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let o = run(&[
            "certify", "--degree", "11", "--table", table, "--seed", "5", "--json", path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(v["verdict"], "GENERATED");
        v.as_object_mut().unwrap().remove("elapsed_ms");
        outs.push(v);
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn certify_discriminant_mode_prints_json() {
    let o = run(&["certify", "--degree", "4", "--mode", "disc"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mode"], "disc");
    assert_eq!(v["discs"]["lattice"]["value"], "-64");
    assert_eq!(v["discs"]["reduction"]["value"], "-9");
}

#[test]
fn errors_exit_with_one() {
    let o = run(&["certify", "--degree", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));

    let o = run(&["certify", "--degree", "7", "--mode", "bogus"]);
    assert_eq!(o.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    std::fs::write(&bad, "7\t2\t13\t13\t1\t7\t1,4,1\t11|11,10\n").unwrap();
    let o = run(&["certify", "--degree", "7", "--table", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn primitivity_self_test() {
    let o = run(&["primitivity", "--seed", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("pass ")).count(), 4);
}
