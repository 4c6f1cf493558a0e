use cahiers::expr::{parse, Expr, ZeroTest};
use cahiers::jet::{JetContext, Section};
use cahiers::random::Sampler;
use cahiers::variational::{euler_lagrange, residual, Grid, Jacobi, Lagrangian};
use proptest::prelude::*;

fn line() -> JetContext {
    JetContext::new(["x"], ["u"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn total_divergences_are_null_lagrangians(seed in any::<u64>()) {
        let c = JetContext::new(["t", "x"], ["u", "v"]).unwrap();
        let f = Sampler::new(seed).jet_expr(&c, 1, 3);
        let l = Lagrangian::new(&c, c.total_derivative(&f, 1)).unwrap();
        let el = euler_lagrange(&l);
        for e in &el.equations {
            prop_assert!(ZeroTest::default().is_zero(e), "{f}: {e}");
        }
    }

    #[test]
    fn euler_lagrange_is_linear(seed in any::<u64>()) {
        let c = line();
        let mut s = Sampler::new(seed);
        let (f, g, a) = (s.jet_expr(&c, 2, 2), s.jet_expr(&c, 2, 2), s.rational());
        let el = |e: Expr| euler_lagrange(&Lagrangian::new(&c, e).unwrap()).equations[0].clone();
        let lhs = el(f.clone() + a.clone() * g.clone());
        let rhs = el(f) + a * el(g);
        prop_assert!(ZeroTest::default().is_zero(&(lhs - rhs)));
    }

    #[test]
    fn jacobi_operator_is_self_adjoint(seed in any::<u64>()) {
        let c = line();
        let mut s = Sampler::new(seed);
        // polynomial in the jet variables so the quadrature below is exact
        let density = s.polynomial(&["u", "u_x", "u_xx", "x"], 4, 3).subs_var("x", &parse("cos(x)").unwrap());
        let l = Lagrangian::new(&c, density).unwrap();
        let j = Jacobi::derive(&l);
        let phi = s.trig_section(&c, 2);
        let (z1, z2) = (s.trig_polynomial(&["x"], 2), s.trig_polynomial(&["x"], 2));
        let grid = Grid::periodic(&["x"], 64);
        let j1 = j.apply(&phi, &Section::new(vec![z1.clone()]));
        let j2 = j.apply(&phi, &Section::new(vec![z2.clone()]));
        let a = grid.integrate(&c, &(z2 * j1.unwrap()[0].clone())).unwrap();
        let b = grid.integrate(&c, &(z1 * j2.unwrap()[0].clone())).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn golden_equations() {
    let plane = JetContext::new(["t", "x"], ["u"]).unwrap();
    let el = euler_lagrange(&Lagrangian::parse(&plane, "0.5*(u_t^2 - u_x^2)").unwrap());
    assert_eq!(el.to_string(), "EL_u = -u_tt + u_xx");
    let two = JetContext::new(["x"], ["u", "v"]).unwrap();
    let el = euler_lagrange(&Lagrangian::parse(&two, "u_x*v_x + u*v^2").unwrap());
    assert_eq!(el.get("u"), Some(&parse("v^2 - v_xx").unwrap()));
    assert_eq!(el.get("v"), Some(&parse("2*u*v - u_xx").unwrap()));
}

#[test]
fn wave_equation_residuals() {
    let c = JetContext::new(["t", "x"], ["u"]).unwrap();
    let l = Lagrangian::parse(&c, "0.5*(u_t^2 - u_x^2)").unwrap();
    let grid = Grid::parse("t:0:2*pi:32:periodic, x:0:2*pi:32:periodic").unwrap();
    let on = residual(&l, &Section::parse(&c, "u = sin(x - t)").unwrap(), &grid, 1e-8).unwrap();
    assert!(on.on_shell, "{}", on.max);
    let off = residual(&l, &Section::parse(&c, "u = x^2").unwrap(), &grid, 1e-8).unwrap();
    assert!(!off.on_shell);
    assert!((off.max - 2.0).abs() < 1e-12);
}

#[test]
fn jacobi_of_wave_equation() {
    let c = JetContext::new(["t", "x"], ["u"]).unwrap();
    let j = Jacobi::derive(&Lagrangian::parse(&c, "0.5*(u_t^2 - u_x^2)").unwrap());
    assert_eq!(j.operator(), vec![parse("-Z_tt + Z_xx").unwrap()]);
    assert!(j.to_string().contains("dEL_u/du_xx = 1"));
}

#[test]
fn perturbation_names_avoid_collisions() {
    let c = JetContext::new(["x"], ["Z"]).unwrap();
    let j = Jacobi::derive(&Lagrangian::parse(&c, "Z_x^2").unwrap());
    assert_eq!(j.operator(), vec![parse("-2*Z0_xx").unwrap()]);
}
