use std::collections::BTreeMap;

use cahiers::expr::{parse, Expr};
use cahiers::morphism::{weil_bundle_map, AlgebraMorphism, ThickenedSpec};
use cahiers::random::Sampler;
use cahiers::weil::WeilAlgebra;
use proptest::prelude::*;

fn images(pairs: &[(&str, &str)]) -> BTreeMap<String, Expr> {
    pairs.iter().map(|(k, v)| (k.to_string(), parse(v).unwrap())).collect()
}

fn dual_point(x: &str, y: &str) -> AlgebraMorphism {
    AlgebraMorphism::from_exprs(
        ThickenedSpec::cartesian(["x", "y"]).unwrap(),
        ThickenedSpec::infinitesimal(WeilAlgebra::dual_numbers()),
        &images(&[("x", x), ("y", y)]),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bundle_maps_respect_identity(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let phi = dual_point(&format!("{} + ({})*e1", s.rational(), s.rational()), "2 - e1");
        let id = [parse("x").unwrap(), parse("y").unwrap()];
        prop_assert_eq!(weil_bundle_map(&id, &["x", "y"], &["x", "y"], &phi).unwrap(), phi);
    }

    #[test]
    fn pushforward_is_the_chain_rule(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let f = s.polynomial(&["x", "y"], 3, 3);
        let (a, b) = (s.rational(), s.rational());
        let phi = dual_point(&format!("1/2 + ({a})*e1"), &format!("-1 + ({b})*e1"));
        let pushed = weil_bundle_map(std::slice::from_ref(&f), &["x", "y"], &["z"], &phi).unwrap();
        let at: BTreeMap<String, Expr> = images(&[("x", "1/2"), ("y", "-1")]);
        let slope = f.differentiate("x").subs(&at) * a + f.differentiate("y").subs(&at) * b;
        let expected = pushed.image("z").unwrap().coeff_expr(1);
        prop_assert_eq!(slope, expected);
    }
}

#[test]
fn composition_is_associative() {
    let ab = AlgebraMorphism::pullback(&["x"], &["y"], &[parse("x^2").unwrap()]).unwrap();
    let bc = AlgebraMorphism::pullback(&["y"], &["z"], &[parse("y + 1").unwrap()]).unwrap();
    let p = AlgebraMorphism::from_exprs(
        ThickenedSpec::cartesian(["x"]).unwrap(),
        ThickenedSpec::infinitesimal(WeilAlgebra::disk(1, 2).unwrap()),
        &images(&[("x", "3 + e1")]),
    )
    .unwrap();
    let left = p.compose(&ab).unwrap().compose(&bc).unwrap();
    let right = p.compose(&ab.compose(&bc).unwrap()).unwrap();
    assert_eq!(left, right);
    assert_eq!(left.image("z").unwrap().to_string(), "10 + 6*e1 + e1^2");
    assert!(bc.compose(&ab).is_err());
}

#[test]
fn json_round_trip() {
    let m = dual_point("1 + 2*e1", "-e1");
    let text = serde_json::to_string(&m).unwrap();
    let back: AlgebraMorphism = cahiers::json::from_json_str(&text).unwrap();
    assert_eq!(back, m);
    let err = cahiers::json::from_json_str::<AlgebraMorphism>(r#"{"source": {"smooth": ["x"]}}"#).unwrap_err();
    assert!(err.path.starts_with("source"), "{}", err.path);
}

#[test]
fn tangent_operations() {
    let u = dual_point("1 + 2*e1", "e1");
    let v = dual_point("1 - e1", "3*e1");
    assert_eq!(u.tangent_add(&v).unwrap(), dual_point("1 + e1", "4*e1"));
    assert_eq!(u.tangent_scale(&Expr::ratio(1, 2)).unwrap(), dual_point("1 + e1", "1/2*e1"));
    let elsewhere = dual_point("2 + e1", "0");
    assert!(u.tangent_add(&elsewhere).is_err());
}
