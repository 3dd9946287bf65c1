use hahn::eval::parse_series;
use hahn::expr::parse;
use hahn::io::{series_from_json, series_to_json};
use hahn::sample::{self, SeriesShape};
use hahn::{make_field, Error, Rat, Series};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS: [&str; 50] = [
    "t",
    "g",
    "1",
    "-1",
    "3/4",
    "t^2",
    "t^(1/2)",
    "t^(-1)",
    "t^(-3/7)",
    "t^(1/2) + 3*t",
    "(1+t)^(1/2)",
    "(1 + t)^(-1/3)",
    "t^2^2",
    "x^2^3 + x",
    "inv(t - t^2)",
    "1/(1-t)",
    "t/(1-t)",
    "t - t^2 - t^3",
    "-t + t^2",
    "-(t + 1)",
    "2*t*t",
    "(t + 1)*(t - 1)",
    "((t))",
    "g*t + (g+1)*t^2",
    "g^2 + g + 1",
    "root(1 + t, 3)",
    "trace(t^(-1) + 1 + t)",
    "norm(5*t^3 + t^4)",
    "subst(t + t^2, t^(-1) + t^(-1/2))",
    "classify(t^(-1) + 1)",
    "sign(t^(-1) + t)",
    "solve(t, \"x^2+x\")",
    "solve(t^(-1), x^2 + x)",
    "h(t^(-1) + t, 2)",
    "t + O(t^3)",
    "1 + O(t)",
    "O(t^(5/2))",
    "a + b*c",
    "a - b - c",
    "a/b/c",
    "a^2^3",
    "(a + b)^(2/3)",
    "f(a, b, c)",
    "f()",
    "-a^2",
    "(-a)^2",
    "-(-t)",
    "t^(-1/2) * t^(1/2)",
    "12345678901234567890*t",
    "x^2 + x - x^4",
];

#[test]
fn corpus_round_trips() {
    for src in CORPUS {
        let e = parse(src).unwrap_or_else(|err| panic!("{src}: {err}"));
        let printed = e.to_string();
        let again = parse(&printed).unwrap_or_else(|err| panic!("{printed}: {err}"));
        assert_eq!(again, e, "{src} -> {printed}");
        assert_eq!(again.to_string(), printed);
    }
}

#[test]
fn syntax_errors_have_columns() {
    match parse("t^^2") {
        Err(Error::Parse { column, .. }) => assert_eq!(column, 3),
        other => panic!("{other:?}"),
    }
    for bad in ["", "t +", "(t", "t)", "t^-1", "f(,)", "\"open", "t $ 2"] {
        assert!(matches!(parse(bad), Err(Error::Parse { .. })), "{bad}");
    }
}

#[test]
fn json_and_text_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for spec in ["Q", "F2", "F4", "F9:x^2+1", "F27"] {
        let ctx = make_field(spec).unwrap();
        for _ in 0..100 {
            let s = sample::series(&ctx, &mut rng, &SeriesShape::default());
            let from_json = series_from_json(&series_to_json(&s)).unwrap();
            let from_text = Series::parse(&ctx, &s.to_string()).unwrap();
            assert_eq!(from_json, from_text);
            assert_eq!(from_json.cap(), s.cap());
            assert!(from_json.terms().eq(s.terms()));
        }
    }
}

#[test]
fn mixed_fields_are_rejected() {
    let f2 = make_field("F2").unwrap();
    let f4 = make_field("F4").unwrap();
    assert_eq!(Series::t(&f2).add(&Series::t(&f4)), Err(Error::FieldMismatch));
    assert!(parse_series(&f2, "g*t", &Rat::one()).is_err());
}
