use cahiers::expr::{parse, ZeroTest};
use cahiers::jet::{JetContext, JetVar, MultiIndex, Section};
use cahiers::random::Sampler;
use proptest::prelude::*;

fn ctx() -> JetContext {
    JetContext::new(["t", "x"], ["u", "v"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn chain_rule_holds(seed in any::<u64>()) {
        let c = ctx();
        let mut s = Sampler::new(seed);
        let f = s.jet_expr(&c, 2, 3);
        let phi = Section::new(vec![s.smooth(c.coords(), 2), s.smooth(c.coords(), 2)]);
        let mu = s.int(0, 1) as usize;
        prop_assert!(c.chain_rule_identity(&f, &phi, mu, &ZeroTest::default()).is_ok(), "{f}");
    }

    #[test]
    fn total_derivatives_commute(seed in any::<u64>()) {
        let c = ctx();
        let f = Sampler::new(seed).jet_expr(&c, 2, 3);
        let tx = c.total_derivative(&c.total_derivative(&f, 1), 0);
        let xt = c.total_derivative(&c.total_derivative(&f, 0), 1);
        prop_assert!(ZeroTest::default().is_zero(&(tx - xt)));
    }

    #[test]
    fn total_derivative_raises_order_by_one(seed in any::<u64>()) {
        let c = ctx();
        let f = Sampler::new(seed).jet_expr(&c, 2, 3);
        let n = c.order(&f);
        let d = c.total_derivative(&f, 0);
        prop_assert!(c.order(&d) <= n + 1);
    }
}

#[test]
fn jet_variable_names() {
    let c = ctx();
    let v = JetVar::new(1, MultiIndex::new(vec![1, 0, 1]));
    assert_eq!(c.var_name(&v), "v_txx");
    assert_eq!(c.parse_var("v_xtx"), Some(v));
    assert_eq!(c.parse_var("u"), Some(JetVar::new(0, MultiIndex::empty())));
    assert_eq!(c.parse_var("w_x"), None);
    assert_eq!(MultiIndex::all_of_order(2, 2).len(), 3);
    assert_eq!(MultiIndex::all_up_to(2, 3).len(), 10);
}

#[test]
fn prolongation_of_a_section() {
    let c = JetContext::new(["x"], ["u"]).unwrap();
    let phi = Section::parse(&c, "u = x^3").unwrap();
    let p = c.prolong(&phi, 3).unwrap();
    let get = |n: &str| p.get(&c.parse_var(n).unwrap()).cloned().unwrap();
    assert_eq!(get("u_x"), parse("3*x^2").unwrap());
    assert_eq!(get("u_xxx"), parse("6").unwrap());
    let f = c.parse("u*u_x").unwrap();
    assert_eq!(c.substitute(&f, &p).unwrap(), parse("3*x^5").unwrap());
}

#[test]
fn total_derivative_formula() {
    let c = JetContext::new(["x"], ["u"]).unwrap();
    let f = c.parse("x*u^2").unwrap();
    assert_eq!(c.total_derivative(&f, 0), parse("u^2 + 2*x*u*u_x").unwrap());
}

#[test]
fn bad_contexts_and_sections() {
    assert!(JetContext::new(["x", "x"], ["u"]).is_err());
    assert!(JetContext::new(["x"], ["x"]).is_err());
    assert!(Section::parse(&ctx(), "u = x").is_err());
    assert!(Section::parse(&ctx(), "u = x, v = u").is_err());
}
