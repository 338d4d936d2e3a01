use super::*;

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("sheffer").chain(args.iter().copied())).unwrap()
}

fn run_ok(args: &[&str]) -> Output {
    run(&cli(args)).unwrap()
}

#[test]
fn degree_ranges_parse() {
    let r: DegreeRange = "1:24".parse().unwrap();
    assert_eq!((r.start, r.end), (1, 24));
    assert!("5:2".parse::<DegreeRange>().is_err());
    assert!("5".parse::<DegreeRange>().is_err());
    assert_eq!("auto".parse::<LPrime>().unwrap(), LPrime::Auto);
    assert_eq!("3".parse::<LPrime>().unwrap(), LPrime::Level(3));
}

#[test]
fn family_summary_lists_every_degree() {
    let out = run_ok(&["family", "--kind", "falling", "--dim", "1", "--max-degree", "8"]);
    assert!(out.pass);
    assert_eq!(out.summary.lines().count(), 2 + 9);
    let seq = crate::sheffer::ShefferSequence::from_json(&out.document).unwrap();
    let v = seq.block(2, 3).unwrap().get(0, 0).re;
    assert!((v + 3.0).abs() < 1e-12);
}

#[test]
fn exit_codes_follow_error_kind() {
    assert_eq!(exit_code(&Error::InvalidSpec("x".into())), 2);
    assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), 3);
    assert_eq!(exit_code(&Error::DegreeOverflow { degree: 3, max: 2 }), 4);
    assert_eq!(exit_code(&Error::Precondition("x".into())), 5);
    assert_eq!(main_with(["sheffer", "family", "--kind", "bessel"]), 2);
    assert_eq!(main_with(["sheffer", "family"]), 2);
    assert_eq!(main_with(["sheffer", "bounds", "--kind", "falling", "--max-degree", "6", "--l-prime", "0"]), 5);
}

#[test]
fn config_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"command":"diverge","family":{"kind":"falling","dim":1,"N":4},"alpha":2,"degrees":"1:8","l_prime":0,"format":"csv"}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = run_ok(&["diverge", "--kind", "hermite", "--degrees", "1:24", "--config", p]);
    assert!(out.document.starts_with("degree,ratio,norm_num,norm_den\n"));
    assert_eq!(out.document.lines().count(), 9);
    assert!(out.summary.contains("falling"));
    assert!(run(&cli(&["probe", "--kind", "falling", "--config", p])).is_err());
}

#[test]
fn diverge_verdicts_for_falling_and_hermite() {
    let falling = run_ok(&["diverge", "--family", "falling", "--alpha", "2", "--degrees", "1:24"]);
    assert!(falling.document.contains("\"unbounded_looking\""));
    let hermite = run_ok(&["diverge", "--family", "hermite", "--alpha", "2", "--degrees", "1:24"]);
    assert!(hermite.document.contains("\"bounded\""));
}

#[test]
fn bounds_falling_passes() {
    let out = run_ok(&["bounds", "--family", "falling", "--alpha", "1", "--l", "0"]);
    assert!(out.pass);
    let csv = run_ok(&["bounds", "--family", "falling", "--format", "csv"]);
    assert!(csv.document.starts_with("check,measured,theoretical,pass,params\noperator,"));
}

#[test]
fn expand_and_apply_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cube.json");
    let cube = crate::series::Series::<Complex64>::var(1, 0, 3)
        .mul(&crate::series::Series::var(1, 0, 3))
        .unwrap()
        .mul(&crate::series::Series::var(1, 0, 3))
        .unwrap();
    std::fs::write(&input, cube.to_json().unwrap()).unwrap();
    let i = input.to_str().unwrap();
    let out = run_ok(&["expand", "--kind", "falling", "--max-degree", "3", "--input", i]);
    // z^3 = (z)_3 + 3 (z)_2 + (z)_1
    let coeffs = crate::series::Series::<Complex64>::from_json(&out.document).unwrap();
    for (j, c) in [(1, 1.0), (2, 3.0), (3, 1.0)] {
        assert!((coeffs.coeff_of(&[j]).re - c).abs() < 1e-12);
    }
    let expanded = dir.path().join("coeffs.json");
    std::fs::write(&expanded, &out.document).unwrap();
    let back = run_ok(&["apply", "--kind", "falling", "--max-degree", "3", "--input", expanded.to_str().unwrap()]);
    let back = crate::series::Series::<Complex64>::from_json(&back.document).unwrap();
    assert!(back.max_abs_diff(&cube) < 1e-9);
    assert!(matches!(
        run(&cli(&["expand", "--kind", "falling", "--max-degree", "2", "--input", i])),
        Err(Error::DegreeOverflow { .. })
    ));
}

#[test]
fn custom_identity_family_has_identity_blocks() {
    let out = run_ok(&["family", "--kind", "custom", "--a", "identity", "--rho", "one", "--max-degree", "4"]);
    let seq = crate::sheffer::ShefferSequence::from_json(&out.document).unwrap();
    for n in 0..=4 {
        for k in 0..=n {
            let v = seq.block(k, n).unwrap().get(0, 0).re;
            assert_eq!(v, if k == n { 1.0 } else { 0.0 });
        }
    }
}

#[test]
fn roundtrip_and_probe_are_deterministic() {
    let args = ["roundtrip", "--kind", "charlier", "--dim", "2", "--max-degree", "5", "--samples", "10", "--seed", "7"];
    let (a, b) = (run_ok(&args), run_ok(&args));
    assert!(a.pass);
    assert_eq!(a.document, b.document);
    let probe = run_ok(&["probe", "--kind", "laguerre", "--k", "-0.5", "--format", "csv"]);
    assert!(probe.document.starts_with("degree,norm,inverse_norm\n0,"));
}
