use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arrangeclass"))
        .args(args)
        .env_remove("ARRANGECLASS_CACHE")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn sigs_lists_signatures() {
    let o = run(&["sigs", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "[4^1]\n[2^3 3^1]\n[2^6]\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["enumerate", "2^3 3^"]).status.code(), Some(1));
    let o = run(&["enumerate", "2^16 3^4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--extended"));
    assert_eq!(run(&["lattice", "l=3 (1,2)(1,2)"]).status.code(), Some(1));
}

#[test]
fn enumerate_with_cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let first = run(&["--cache", cache, "enumerate", "2^6 3^3", "--list"]);
    assert!(first.status.success());
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let second = run(&["--cache", cache, "enumerate", "2^6 3^3", "--list"]);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(stdout(&first).lines().count(), 305);
}

#[test]
fn classify_and_compare() {
    let o = run(&["classify", "2^6 3^3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains('2'));
    let o = run(&["pi1", "l=3 (1,3)", "--mode", "projective"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.svg");
    let o = run(&["render", "l=3 (1,2)(2,3)(1,2)", "-o", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(path).unwrap().starts_with("<svg"));
}

#[test]
fn report_is_tsv() {
    let o = run(&["report", "6", "--no-groups"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("lines\tsignature"));
    assert!(out.contains("[2^6 3^3]\tdone\t304\t2"));
}
