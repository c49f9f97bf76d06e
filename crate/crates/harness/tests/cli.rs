//! End-to-end checks of the command-line interface.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dygraph"))
}

#[test]
fn gen_run_round_trip_and_exit_codes() {
    let dir = std::env::temp_dir().join(format!("dygraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let trace = dir.join("t.trace");

    let out = bin()
        .args(["gen", "--profile", "uniform", "--n", "10", "--steps", "40", "--seed", "3"])
        .args(["--structure", "sssp", "-o", trace.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = bin()
        .args(["run", "--structure", "sssp", "--trace", trace.to_str().unwrap(), "--check"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("mismatches=0"), "{stdout}");
    assert!(stdout.contains("result: ok"));

    // Same trace with fault injection must fail with a nonzero exit code.
    let out = bin()
        .args(["run", "--structure", "sssp", "--trace", trace.to_str().unwrap()])
        .args(["--check", "--fault-inject"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("result: FAILED"));

    // Parameter overrides reach the structure.
    let out = bin()
        .args(["run", "--structure", "sssp", "--trace", trace.to_str().unwrap()])
        .args(["--check", "--mode", "rand", "--seed", "9", "--params", "h=3,delta=4"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = bin().args(["bench", "--sizes", "8,16", "--h", "3", "--repeat", "5"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("fitted exponent"), "{stdout}");

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bad_usage_exits_with_two() {
    let out = bin().args(["run", "--structure", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
