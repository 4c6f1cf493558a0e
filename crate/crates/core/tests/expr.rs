use std::collections::BTreeMap;

use cahiers::expr::{parse, Binding, Expr, ZeroTest};
use cahiers::random::Sampler;
use proptest::prelude::*;

fn at(x: f64, y: f64) -> Binding {
    [("x".to_string(), x), ("y".to_string(), y)].into_iter().collect()
}

proptest! {
    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let e = Sampler::new(seed).smooth(&["x", "y"], 3);
        let back = parse(&e.to_string()).unwrap();
        prop_assert_eq!(&back, &e, "printed as {}", e);
    }

    #[test]
    fn derivative_matches_central_difference(seed in any::<u64>(), x in -1.0f64..1.0, y in -1.0f64..1.0) {
        let e = Sampler::new(seed).smooth(&["x", "y"], 3);
        let d = e.differentiate("x");
        let h = 1e-6;
        if let (Ok(exact), Ok(p), Ok(m)) = (d.eval(&at(x, y)), e.eval(&at(x + h, y)), e.eval(&at(x - h, y))) {
            let fd = (p - m) / (2.0 * h);
            prop_assume!(exact.is_finite() && fd.is_finite() && exact.abs() < 1e4);
            prop_assert!((exact - fd).abs() <= 1e-5 * exact.abs().max(1.0), "{e}: {exact} vs {fd}");
        }
    }

    #[test]
    fn addition_and_multiplication_commute(a in any::<u64>(), b in any::<u64>()) {
        let f = Sampler::new(a).polynomial(&["x", "y"], 4, 3);
        let g = Sampler::new(b).polynomial(&["x", "y"], 4, 3);
        prop_assert_eq!(f.clone() + g.clone(), g.clone() + f.clone());
        prop_assert_eq!(f.clone() * g.clone(), g * f);
    }

    #[test]
    fn substitution_commutes_with_evaluation(seed in any::<u64>(), x in -1.0f64..1.0) {
        let mut s = Sampler::new(seed);
        let f = s.polynomial(&["x", "y"], 4, 3);
        let g = s.polynomial(&["x"], 3, 2);
        let composed = f.subs(&BTreeMap::from([("y".to_string(), g.clone())]));
        let direct = f.eval(&at(x, g.eval(&at(x, 0.0)).unwrap())).unwrap();
        let via = composed.eval(&at(x, 0.0)).unwrap();
        prop_assert!((direct - via).abs() <= 1e-9 * direct.abs().max(1.0));
    }
}

#[test]
fn zero_test_recognizes_identities() {
    let z = ZeroTest::default();
    for identity in ["sin(x)^2 + cos(x)^2 - 1", "exp(x + y) - exp(x)*exp(y)", "(x + 1)^2 - x^2 - 2*x - 1"] {
        assert!(z.is_zero(&parse(identity).unwrap()), "{identity}");
    }
    assert!(!z.is_zero(&parse("sin(x)^2 - cos(x)^2").unwrap()));
}

#[test]
fn canonical_forms_agree() {
    for (a, b) in [("x*y + y*x", "2*x*y"), ("(x^2)^3", "x^6"), ("x - x", "0"), ("2*x/4", "x/2")] {
        assert_eq!(parse(a).unwrap(), parse(b).unwrap(), "{a} vs {b}");
    }
}

#[test]
fn parse_errors_are_reported() {
    for bad in ["", "x +", "sin(", "1/*2", "foo(x)", "x^y"] {
        assert!(parse(bad).is_err(), "{bad}");
    }
}

#[test]
fn json_round_trip() {
    let e = parse("sin(x)^2 + 3/4*exp(-y)").unwrap();
    let text = serde_json::to_string(&e).unwrap();
    let back: Expr = cahiers::json::from_json_str(&text).unwrap();
    assert_eq!(back, e);
    let err = cahiers::json::from_json_str::<Expr>("\"x +\"").unwrap_err();
    assert!(!err.message.is_empty());
    assert!(cahiers::json::from_json_str::<Expr>("[1, 2").is_err());
}
