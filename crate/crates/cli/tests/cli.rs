use hahn::io::series_from_json;
use hahn::{make_field, Series};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hahn").chain(args.iter().copied());
    let code = hahn_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn golden_outputs() {
    let (code, out, _) = run(&["eval", "--field", "F2", "--cap", "4", "inv(t - t^2)"]);
    assert_eq!((code, out), (0, golden("eval_inv.txt")));
    let (code, out, _) = run(&["hypA", "--field", "F2", "--poly", "x^2+x"]);
    assert_eq!((code, out), (0, golden("hypa_f2.txt")));
    let (code, out, _) = run(&["demo", "char-p-divergence", "--p", "2", "--K", "5"]);
    assert_eq!((code, out), (0, golden("demo_divergence_p2_k5.txt")));
}

#[test]
fn exit_codes() {
    // usage errors
    for args in [
        &["eval", "t^^2"][..],
        &["bogus"],
        &["eval"],
        &["--cap", "x", "eval", "t"],
        &["--format", "yaml", "eval", "t"],
        &["solve", "--poly", "x^2+x"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 2, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    // domain errors
    for args in [
        &["--field", "F6", "eval", "t"][..],
        &["--field", "F4", "--modulus", "x^2+1", "eval", "t"],
        &["eval", "inv(0)"],
        &["eval", "2^(1/2)"],
        &["--field", "F2", "classify", "1"],
        &["norm", "t"],
        &["--field", "F2", "solve", "--poly", "x^2+x", "--rhs", "1"],
        &["--field", "F2", "solve", "--poly", "x^2+x", "--rhs", "t^(-1)", "--target", "1"],
        &["--field", "F2", "sign-via-trace", "1 + t"],
        &["subst", "2*t", "t"],
    ] {
        let (code, out, err) = run(args);
        assert_eq!(code, 1, "{args:?}: {out} {err}");
        assert!(err.starts_with("error: "), "{err}");
    }
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn json_matches_text() {
    for (field, expr) in [
        ("F2", "inv(t - t^2)"),
        ("Q", "(1+t)^(1/2)"),
        ("F9", "g*t^(-1/3) + (g+1) + O(t^2)"),
        ("F4", "root(1 + g*t, 3)"),
        ("F3", "subst(t - t^2, t^(-1/3))"),
    ] {
        let ctx = make_field(field).unwrap();
        let (c1, text, _) = run(&["--field", field, "--cap", "3", "eval", expr]);
        let (c2, json, _) = run(&["--field", field, "--cap", "3", "--format", "json", "eval", expr]);
        assert_eq!((c1, c2), (0, 0));
        let from_text = Series::parse(&ctx, text.trim()).unwrap();
        let from_json = series_from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(from_text, from_json, "{field} {expr}");
    }
}

#[test]
fn subcommands() {
    let f2 = ["--field", "F2"];
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["--cap", "16", "solve", "--poly", "x^2+x", "--rhs", "t"], "t + t^2 + t^4 + t^8 + O(t^16)"),
        (vec!["solve", "--poly", "x^2+x", "--rhs", "t^(-1)", "--target=-1/16"], "t^(-1/2) + t^(-1/4) + t^(-1/8) + O(t^(-1/16))"),
        (vec!["artin-schreier", "--n", "1", "--target=-1/8", "t^(-1) + 1"], "t^(-1/2) + t^(-1/4) + O(t^(-1/8))"),
        (vec!["trace", "t^(-1) + 1 + t"], "1"),
        (vec!["sign-via-trace", "t^(-1) + t"], "negative"),
        (vec!["sign-via-trace", "t^(1/3) + t"], "positive"),
        (vec!["classify", "t^(-1) + 1"], "S_inf"),
        (vec!["classify", "1 + t^(1/2)"], "S_1"),
        (vec!["--cap", "4", "subst", "t + t^2", "t^2"], "t^2 + O(t^4)"),
        (vec!["hypA", "--poly", "x"], "SATISFIES"),
        (vec!["demo", "laws", "--trials", "10"], "distributivity: 10/10"),
    ];
    for (args, want) in cases {
        let all: Vec<&str> = f2.iter().copied().chain(args.iter().copied()).collect();
        let (code, out, err) = run(&all);
        assert_eq!(code, 0, "{all:?}: {err}");
        assert!(out.starts_with(want), "{all:?}: {out}");
    }
    let (code, out, _) = run(&["--field", "Q", "norm", "t"]);
    assert_eq!(code, 1, "{out}");
    let (code, out, _) = run(&["--field", "F9", "norm", "g*t + t^2"]);
    assert_eq!((code, out.as_str()), (0, "g\n"));
    let (code, out, _) = run(&["--field", "F4", "orbit-witness", "g*t + t^2"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("image of t: g*t + t^2\n"), "{out}");
    let (code, _, err) = run(&["--field", "F2", "subst", "t - t^2", "t^(-1/2) + t^(-1/4)"]);
    assert_eq!(code, 0);
    assert!(err.contains("warning"));
}
