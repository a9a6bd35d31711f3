use std::process::Command;

fn trigint() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trigint"))
}

#[test]
fn success_writes_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.cfg");
    std::fs::write(&cfg, "kernel = fejer\ndegrees = 200\n").unwrap();
    let out = dir.path().join("cond.csv");
    let status = trigint()
        .args(["cond-vs-degree", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(out).unwrap().lines().count(), 2);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "degrees = 7\n").unwrap();
    let out = trigint().args(["cond-vs-degree", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree 7"));
    let out = trigint().args(["reconstruct", "--config", "/no/such.cfg"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = trigint().arg("no-such-experiment").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dense.cfg");
    // far more separated nodes than fit on the circle
    std::fs::write(&cfg, "nodes = separated(100, 0.2)\ndegrees = 64\n").unwrap();
    let out = trigint()
        .args(["cond-vs-degree", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("x.csv"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
