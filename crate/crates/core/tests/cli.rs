use std::process::Command;

fn objpert() -> Command {
    Command::new(env!("CARGO_BIN_EXE_objpert"))
}

#[test]
fn bounds_prints_the_worked_example() {
    let out = objpert()
        .args([
            "bounds", "--mechanism", "objdisc", "--G", "1", "--D", "1", "--d", "1", "--tau", "1", "--eps", "1", "--delta",
            "0.3678794", "--beta", "1.471518", "--n", "14",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "2.0");
}

#[test]
fn exit_codes() {
    assert_eq!(objpert().args(["run", "--config", "missing.cfg"]).output().unwrap().status.code(), Some(1));
    assert_eq!(objpert().args(["synth", "--n", "3", "--d", "2", "--wat"]).output().unwrap().status.code(), Some(1));
    assert_eq!(objpert().arg("--help").output().unwrap().status.code(), Some(0));
    // margin beyond the sphere cannot be met
    let out = objpert().args(["synth", "--n", "3", "--d", "2", "--margin", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn synth_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<_> = ["a.csv", "b.csv"].iter().map(|f| dir.path().join(f)).collect();
    for f in &files {
        let st = objpert().args(["synth", "--n", "10", "--d", "2", "--seed", "7", "--out"]).arg(f).output().unwrap().status;
        assert!(st.success());
    }
    let a = std::fs::read(&files[0]).unwrap();
    assert_eq!(a, std::fs::read(&files[1]).unwrap());
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 11);
}

#[test]
fn seed_changes_the_data() {
    let run = |seed: &str| objpert().args(["synth", "--n", "5", "--d", "2", "--seed", seed]).output().unwrap().stdout;
    assert_ne!(run("1"), run("2"));
}

#[test]
fn command_line_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    std::fs::write(&cfg, "# synthetic\nn = 4\nd = 3\nseed = 5\n").unwrap();
    let out = objpert().arg("--config").arg(&cfg).args(["synth", "--n", "6"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert_eq!(text.lines().next().unwrap(), "x0,x1,x2,y");
    let direct = objpert().args(["synth", "--n", "6", "--d", "3", "--seed", "5"]).output().unwrap().stdout;
    assert_eq!(text.into_bytes(), direct);
}

#[test]
fn verify_separator_reports_json() {
    let out = objpert().args(["verify-separator", "--d", "2"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"], "pass");
    let out = objpert().args(["verify-separator", "--d", "2", "--coord-bound", "2", "--radius", "2"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"], "counterexample");
}
