use std::process::{Command, Output};

fn gentle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gentle")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_exit_codes() {
    assert_eq!(gentle(&["validate", "fixture:gentle8"]).status.code(), Some(0));
    let bad = gentle(&["validate", "fixture:cycle_free"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("admissible"));
    assert_eq!(gentle(&["validate", "/definitely/not/here.quiver"]).status.code(), Some(2));
    assert_eq!(gentle(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn validate_reads_files() {
    let dir = std::env::temp_dir().join(format!("gentle-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chain.quiver");
    std::fs::write(&path, "quiver chain\nvertex 1 2\narrow a: 1 -> 2\n").unwrap();
    let out = gentle(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&path, "quiver chain\nvertex 1 2\narrow a: 1 -> 3\n").unwrap();
    let out = gentle(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("3:15"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn genjf_examples() {
    let out = gentle(&["genjf", "fixture:first_gentle", "--module", "M(a)+M(e_2)+M(b)"]);
    assert!(stdout(&out).contains("GenJF = 1:[1];2:[3];3:[1]"));
    let out = gentle(&["genjf", "fixture:a2", "--module", "M(e_1)^3"]);
    assert!(stdout(&out).contains("GenJF = 1:[3];2:[0]"));
    let out = gentle(&[
        "genjf",
        "fixture:jrex1",
        "--module",
        "M(b) + M(a) + M(c^-1 a) + M(c)",
        "--prime",
        "2",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["genjf"], "1:[2];2:[3,1];3:[2];4:[1]");
    assert_eq!(v["engine"], "oracle");
    let out = gentle(&["genjf", "fixture:first_gentle", "--module", "M(a)", "--engine", "structural", "--vertex-hint", "2"]);
    assert!(stdout(&out).contains("Structural"));
}

#[test]
fn json_is_thread_independent() {
    let args = ["genjf", "fixture:jrex1", "--module", "M(e_1) + M(a) + M(c^-1 a) + M(b a)", "--format", "json"];
    let one = gentle(&[&args[..], &["--threads", "1"]].concat());
    let four = gentle(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn analyze_verdicts() {
    let out = gentle(&["analyze", "fixture:jrex1", "--vertex", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["jr"].as_bool(), v["cjr"].as_bool()), (Some(true), Some(true)));
    let out = gentle(&["analyze", "fixture:jrex1", "--vertex", "2", "--witness", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["jr"], false);
    assert_eq!(v["witness"]["genjf"], "1:[2];2:[3,1];3:[2];4:[1]");
    let out = gentle(&["analyze", "fixture:cjrneed1", "--vertex", "2", "--witness", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!((v["jr"].as_bool(), v["cjr"].as_bool()), (Some(true), Some(false)));
    assert_eq!(v["witness"]["kind"], "cjr_rep");
    assert_eq!(gentle(&["analyze", "fixture:jrex1", "--vertex", "9"]).status.code(), Some(2));
}

#[test]
fn recover_examples() {
    let out = gentle(&["recover", "fixture:first_gentle", "--vertex", "2", "--jf", "1:[2];2:[4];3:[1]"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("M(e_2) + M(a)^2 + M(b)"));
    let out = gentle(&["recover", "fixture:first_gentle", "--vertex", "2", "--jf", "1:[0];2:[1];3:[0]"]);
    assert!(stdout(&out).starts_with("M(e_2)\n"));
    let out = gentle(&["recover", "fixture:first_gentle", "--vertex", "2", "--jf", "1:[1];2:[1];3:[1]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("NoSolution"));
    let out = gentle(&["recover", "fixture:jrex1", "--vertex", "2", "--jf", "2:[1]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn combinatorics_commands() {
    let out = gentle(&["basis", "fixture:gentle8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dimension"], 20);
    let out = gentle(&["homdim", "fixture:morphex", "M(e_1) + M(a) + M(c)^2", "M(a) + M(b)"]);
    assert!(stdout(&out).contains("= 1 (kernel), 1 (graph maps)"));
    let out = gentle(&["strings", "fixture:jrex1", "--vertex", "2"]);
    assert!(stdout(&out).contains("c^-1 a"));
    let out = gentle(&["bands", "fixture:kronecker", "--max-len", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bands"].as_array().unwrap().len(), 1);
}

#[test]
fn selftest_passes() {
    let out = gentle(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(!stdout(&out).contains("FAIL"));
}
