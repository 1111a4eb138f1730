use super::*;

fn run_args(args: &[&str]) -> (Result<i32>, String) {
    let mut buf = Vec::new();
    let code = run(std::iter::once("qchd").chain(args.iter().copied()), &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

// small grids keep these fast; accuracy is covered elsewhere
const FAST: [&str; 8] = [
    "--pair-theta-points",
    "6",
    "--pair-phi-points",
    "8",
    "--theta-points",
    "8",
    "--phi-points",
    "12",
];

#[test]
fn curve_writes_one_csv_per_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let mut args = vec![
        "curve",
        "--channel",
        "depolarizing",
        "--q",
        "0.2,0.5",
        "--points",
        "5",
        "--out-dir",
        d,
    ];
    args.extend(FAST);
    let (code, _) = run_args(&args);
    assert_eq!(code.unwrap(), 0);
    for q in ["0.2", "0.5"] {
        let text = std::fs::read_to_string(dir.path().join(format!("depolarizing_{q}_hoeffding.csv"))).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("r,"));
        assert_eq!(lines.count(), 5);
    }
    assert!(dir.path().join("depolarizing_hoeffding_summary.json").exists());
}

#[test]
fn single_point_curve() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let mut args = vec![
        "curve",
        "--channel",
        "amplitude-damping",
        "--gamma",
        "0.3",
        "--points",
        "1",
        "--out-dir",
        d,
    ];
    args.extend(FAST);
    // the Stein exponent is infinite, so the grid needs an explicit end
    assert!(matches!(run_args(&args).0, Err(Error::ParameterOutOfRange { .. })));
    args.extend(["--r-max", "1.0"]);
    assert_eq!(run_args(&args).0.unwrap(), 0);
    let text = std::fs::read_to_string(dir.path().join("amplitude-damping_0.3_hoeffding.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn family_without_parameters_is_a_usage_error() {
    let (r, _) = run_args(&["curve", "--channel", "depolarizing"]);
    assert!(matches!(r, Err(Error::Usage(_))));
    let (r, _) = run_args(&["curve", "--channel", "no-such-thing", "--q", "0.1"]);
    assert!(matches!(r, Err(Error::Usage(_))));
}

#[test]
fn unknown_ids_are_rejected() {
    let (r, _) = run_args(&["reproduce", "example-2"]);
    match r {
        Err(e @ Error::UnknownExample(_)) => assert!(e.to_string().contains("harrow-lambda")),
        other => panic!("{other:?}"),
    }
    let (r, _) = run_args(&["verify", "everything"]);
    assert!(matches!(r, Err(Error::Usage(_))));
    let (r, _) = run_args(&["frobnicate"]);
    assert!(matches!(r, Err(Error::Usage(_))));
}

#[test]
fn help_exits_zero() {
    let (r, text) = run_args(&["--help"]);
    assert_eq!(r.unwrap(), 0);
    for cmd in [
        "curve",
        "reproduce",
        "verify",
        "bound",
        "separate-harrow",
        "classical-dp",
        "power",
    ] {
        assert!(text.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn same_seed_same_bytes() {
    let mut args = vec![
        "--format",
        "json",
        "power",
        "--channel",
        "depolarizing",
        "--q",
        "0.4",
        "--r",
        "0.1",
    ];
    args.extend(FAST);
    let (a, ta) = run_args(&args);
    let (b, tb) = run_args(&args);
    assert_eq!(a.unwrap(), 0);
    assert_eq!(b.unwrap(), 0);
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_str(&ta).unwrap();
    assert!(v.is_object() || v.is_array());
}

#[test]
fn reproduce_harrow_examples() {
    for id in ["harrow-lambda", "harrow-bound", "harrow-adaptive", "pure-chernoff"] {
        let (r, text) = run_args(&["reproduce", id]);
        assert_eq!(r.unwrap(), 0, "{text}");
        assert!(text.starts_with("PASS"));
    }
}

#[test]
fn bound_with_ansatz_and_classical_dp_file() {
    let (r, text) = run_args(&["bound", "--ansatz"]);
    assert_eq!(r.unwrap(), 0, "{text}");
    assert!(text.contains("13.8"));

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("pair.json");
    std::fs::write(
        &p,
        r#"{"W": [[0.9, 0.1], [0.3, 0.7]], "Wbar": [[0.2, 0.8], [0.5, 0.5]]}"#,
    )
    .unwrap();
    let (r, text) = run_args(&[
        "--format",
        "json",
        "classical-dp",
        "--n",
        "3",
        "--pair",
        p.to_str().unwrap(),
    ]);
    assert_eq!(r.unwrap(), 0);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert!(v["adaptive"].as_f64().unwrap() <= v["parallel"].as_f64().unwrap() + 1e-12);
}

#[test]
fn separate_harrow_small() {
    let (r, text) = run_args(&["separate-harrow", "--n", "1", "--samples", "50"]);
    assert_eq!(r.unwrap(), 0, "{text}");
}
