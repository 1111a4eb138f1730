use std::process::Command;

fn qchd() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qchd"))
}

#[test]
fn reproduce_prints_pass_and_exits_zero() {
    let out = qchd().args(["reproduce", "harrow-bound"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("PASS harrow-bound"), "{text}");
}

#[test]
fn usage_errors_exit_two_with_message() {
    let out = qchd().args(["verify", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error:") && err.contains("nussbaum-szkola"), "{err}");

    let out = qchd().args(["reproduce", "nonsense"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_cap_is_validated() {
    let out = qchd()
        .env("QCHD_THREADS", "0")
        .args(["reproduce", "harrow-lambda"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("QCHD_THREADS"));

    let out = qchd()
        .env("QCHD_THREADS", "1")
        .args(["verify", "nussbaum-szkola"])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn bad_channel_file_reports_the_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(
        &p,
        r#"{"in_dim": 2, "out_dim": 2, "kraus": [[[[1,0],[0,0]],[[0,0],[0.9,0]]]]}"#,
    )
    .unwrap();
    let out = qchd()
        .args(["power", "--channel", p.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("trace preserving") && err.contains("1.900e-1"), "{err}");
}
