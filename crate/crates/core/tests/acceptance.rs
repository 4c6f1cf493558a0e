//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cahiers::bicomplex::verify_identities;
use cahiers::expr::{parse, Expr, ZeroTest};
use cahiers::jet::{JetContext, JetVar, MultiIndex, Section};
use cahiers::morphism::{weil_bundle_map, AlgebraMorphism, ThickenedSpec};
use cahiers::random::Sampler;
use cahiers::variational::{
    chart_covariance, euler_lagrange, first_variation, jacobi_fd_check, jacobi_residual, perturb_expand, Grid,
    Lagrangian,
};
use cahiers::weil::{taylor_extend, KaehlerModule, Mode, TangentSlice, WeilAlgebra, WeilElement};
use num_bigint::BigInt;
use num_rational::BigRational;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("dual-number AD vs central differences", Some(Duration::from_secs(1)), dual_number_ad),
        ("higher-order AD, exp over D(1,4)", Some(Duration::from_secs(1)), higher_order_ad),
        ("bicomplex identities on 50 random forms", Some(Duration::from_secs(30)), bicomplex_identities),
        ("Euler-Lagrange golden outputs", Some(Duration::from_secs(1)), golden_euler_lagrange),
        ("first variation on 20 random instances", Some(Duration::from_secs(60)), first_variation_suite),
        ("Jacobi operator vs linearized EL", None, jacobi_fields),
        ("Weil-bundle functoriality and tangent laws", None, weil_bundle_functoriality),
        ("Kaehler forms vs tangent slice, m,l <= 3", Some(Duration::from_secs(5)), kaehler_tangent_dimensions),
        ("perturbative expansion and chart change", None, perturbative_expansion),
        ("chain rule on 30 random triples", None, chain_rule),
    ];
    let mut failed = 0;
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let pass = result.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = limit.map(|l| format!(" (limit {:.0?})", l)).unwrap_or_default();
        println!(
            "criterion {:>2} {}: {name}: {} [{:.3}s{budget}]",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn dual_number_ad() -> Outcome {
    let d = WeilAlgebra::dual_numbers();
    let fns = ["sin(x)", "exp(x)", "x^3", "exp(sin(x))"];
    let mut sampler = Sampler::new(1);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for text in fns {
        let f = parse(text).unwrap();
        for _ in 0..20 {
            let x0 = sampler.uniform(-2.0, 2.0);
            let arg = WeilElement::from_f64(&d, x0).add(&WeilElement::generator(&d, 0).unwrap()).unwrap();
            let ad = taylor_extend(&f, &["x"], &[arg]).unwrap().coeff_f64(1).unwrap();
            let at = |x: f64| f.eval(&[("x".to_string(), x)].into_iter().collect()).unwrap();
            let fd = (at(x0 + h) - at(x0 - h)) / (2.0 * h);
            worst = worst.max((ad - fd).abs() / fd.abs().max(1.0));
        }
    }
    outcome(worst <= 1e-6, format!("max relative gap {worst:.2e} (tol 1e-6)"))
}

fn higher_order_ad() -> Outcome {
    let d = WeilAlgebra::disk(1, 4).unwrap();
    let arg = WeilElement::generator(&d, 0).unwrap();
    let y = taylor_extend(&parse("exp(x)").unwrap(), &["x"], &[arg]).unwrap();
    let mut fact = BigInt::from(1);
    let mut exact = y.mode() == Mode::Rational;
    for k in 0..=4u32 {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        let expected = Expr::rational(BigRational::new(BigInt::from(1), fact.clone()));
        exact &= y.coeff_expr(k as usize) == expected;
    }
    outcome(exact, format!("exp(e1) = {y}"))
}

fn bicomplex_identities() -> Outcome {
    let ctx = JetContext::new(["t", "x"], ["u", "v"]).unwrap();
    let report = verify_identities(&ctx, 3, 50, 7, &ZeroTest::default());
    let counts: Vec<String> = report.checks.iter().map(|c| format!("{} {}/50", c.name, c.passed)).collect();
    outcome(report.passed(), counts.join(", "))
}

fn golden_euler_lagrange() -> Outcome {
    let plane = JetContext::new(["t", "x"], ["u"]).unwrap();
    let line = JetContext::new(["x"], ["u"]).unwrap();
    let cases = [
        (&plane, "0.5*(u_t^2 - u_x^2)", "-u_tt + u_xx"),
        (&line, "0.5*u_x^2 - exp(u)", "-u_xx - exp(u)"),
        (&line, "0.5*u_xx^2", "u_xxxx"),
    ];
    let mut shown = Vec::new();
    let mut pass = true;
    for (ctx, l, expected) in cases {
        let el = euler_lagrange(&Lagrangian::parse(ctx, l).unwrap());
        pass &= el.equations[0] == parse(expected).unwrap();
        shown.push(el.to_string());
    }
    outcome(pass, shown.join("; "))
}

/// Random Lagrangian of jet order at most 2 in the jet variables only, so
/// that it is periodic whenever the section is.
fn random_lagrangian(s: &mut Sampler, ctx: &JetContext) -> Lagrangian {
    let vars: Vec<JetVar> = MultiIndex::all_up_to(ctx.dim(), 2).into_iter().map(|i| JetVar::new(0, i)).collect();
    let mut terms = Vec::new();
    for _ in 0..3 {
        let mut factors = vec![s.rational()];
        for _ in 0..s.int(1, 3) {
            let v = &vars[s.int(0, vars.len() as i64 - 1) as usize];
            factors.push(ctx.var_expr(v));
        }
        terms.push(Expr::mul(factors));
    }
    if s.int(0, 1) == 1 {
        terms.push(s.rational() * Expr::apply(cahiers::expr::Func::Cos, ctx.var_expr(&vars[0])));
    }
    Lagrangian::new(ctx, Expr::add(terms)).unwrap()
}

fn first_variation_suite() -> Outcome {
    let ctx = JetContext::new(["t", "x"], ["u"]).unwrap();
    let grid = Grid::periodic(&["t", "x"], 64);
    let mut s = Sampler::new(5);
    let mut worst = 0.0f64;
    let mut nontrivial = 0;
    for _ in 0..20 {
        let l = random_lagrangian(&mut s, &ctx);
        let phi = s.trig_section(&ctx, 2);
        let z = s.trig_section(&ctx, 2);
        let fv = first_variation(&l, &phi, &z, &grid).unwrap();
        worst = worst.max(fv.gap);
        if fv.lhs.abs() > 1e-3 {
            nontrivial += 1;
        }
    }
    outcome(worst <= 1e-6, format!("max gap {worst:.2e} (tol 1e-6), {nontrivial}/20 with |lhs| > 1e-3"))
}

fn jacobi_fields() -> Outcome {
    let ctx = JetContext::new(["t", "x"], ["u"]).unwrap();
    let mut s = Sampler::new(9);
    let grid = Grid::periodic(&["t", "x"], 64);
    let nodes = grid.axes[0].nodes();
    let points: Vec<Vec<f64>> = (0..50).map(|_| vec![nodes[s.int(0, 63) as usize], nodes[s.int(0, 63) as usize]]).collect();
    let mut worst = 0.0f64;
    for _ in 0..3 {
        let l = random_lagrangian(&mut s, &ctx);
        let phi = s.trig_section(&ctx, 2);
        let z = s.trig_section(&ctx, 2);
        worst = worst.max(jacobi_fd_check(&l, &phi, &z, &points, 1e-4).unwrap().max_error);
    }
    let wave = Lagrangian::parse(&ctx, "0.5*(u_t^2 - u_x^2)").unwrap();
    let phi = Section::parse(&ctx, "u=sin(x-t)").unwrap();
    let r = jacobi_residual(&wave, &phi, &phi, &grid).unwrap();
    outcome(
        worst <= 1e-5 && r <= 1e-10,
        format!("max symbolic vs FD gap {worst:.2e} (tol 1e-5), wave Jacobi residual {r:.2e} (tol 1e-10)"),
    )
}

fn d_point(s: &mut Sampler, alg: &std::sync::Arc<WeilAlgebra>, names: &[&str]) -> AlgebraMorphism {
    let mut images = BTreeMap::new();
    for n in names {
        let mut e = vec![s.rational()];
        for b in alg.basis().iter().skip(1) {
            e.push(s.rational() * b.to_expr());
        }
        images.insert(n.to_string(), Expr::add(e));
    }
    let source = ThickenedSpec::cartesian(names.iter().copied()).unwrap();
    AlgebraMorphism::from_exprs(source, ThickenedSpec::infinitesimal(alg.clone()), &images).unwrap()
}

fn weil_bundle_functoriality() -> Outcome {
    let mut s = Sampler::new(13);
    let disks = [WeilAlgebra::disk(1, 1).unwrap(), WeilAlgebra::disk(1, 2).unwrap(), WeilAlgebra::disk(2, 1).unwrap()];
    let (x, y, z) = (["x1", "x2"], ["y1", "y2"], ["z1"]);
    let mut pairs = 0;
    let mut ok = true;
    for alg in &disks {
        for _ in 0..20 {
            let f = [s.polynomial(&x, 3, 2), s.polynomial(&x, 3, 2)];
            let g = [s.polynomial(&y, 3, 2)];
            let gf: Vec<Expr> = g
                .iter()
                .map(|gi| gi.subs(&y.iter().map(|n| n.to_string()).zip(f.iter().cloned()).collect()))
                .collect();
            let phi = d_point(&mut s, alg, &x);
            let lhs = weil_bundle_map(&gf, &x, &z, &phi).unwrap();
            let rhs = weil_bundle_map(&g, &y, &z, &weil_bundle_map(&f, &x, &y, &phi).unwrap()).unwrap();
            ok &= lhs == rhs;
            pairs += 1;
        }
    }
    let laws = tangent_laws();
    outcome(ok && laws.0, format!("{pairs} pairs over D(1,1), D(1,2), D(2,1); {}", laws.1))
}

/// Vector-space laws of `tangent_add` and `tangent_scale` over every
/// combination of a small set of rational vectors and scalars.
fn tangent_laws() -> (bool, String) {
    let d = WeilAlgebra::dual_numbers();
    let src = ThickenedSpec::cartesian(["x", "y"]).unwrap();
    let tgt = ThickenedSpec::infinitesimal(d);
    let comps = ["0", "1", "-2", "1/3"];
    let vector = |a: &str, b: &str| {
        let images = [("x", format!("1/2 + ({a})*e1")), ("y", format!("-1 + ({b})*e1"))]
            .into_iter()
            .map(|(k, v)| (k.to_string(), parse(&v).unwrap()))
            .collect();
        AlgebraMorphism::from_exprs(src.clone(), tgt.clone(), &images).unwrap()
    };
    let vs: Vec<AlgebraMorphism> = comps.iter().flat_map(|a| comps.iter().map(|b| vector(a, b))).collect();
    let scalars: Vec<Expr> = ["0", "1", "-1", "2/3"].iter().map(|c| parse(c).unwrap()).collect();
    let zero = vector("0", "0");
    let mut checked = 0;
    let mut ok = true;
    for u in &vs {
        ok &= u.tangent_add(&zero).unwrap() == *u;
        ok &= u.tangent_scale(&Expr::one()).unwrap() == *u;
        ok &= u.tangent_scale(&Expr::zero()).unwrap() == zero;
        ok &= u.tangent_add(&u.tangent_scale(&Expr::int(-1)).unwrap()).unwrap() == zero;
        for v in &vs {
            let uv = u.tangent_add(v).unwrap();
            ok &= uv == v.tangent_add(u).unwrap();
            for a in &scalars {
                ok &= uv.tangent_scale(a).unwrap()
                    == u.tangent_scale(a).unwrap().tangent_add(&v.tangent_scale(a).unwrap()).unwrap();
                checked += 1;
            }
        }
        for a in &scalars {
            for b in &scalars {
                let sum = u.tangent_scale(&(a.clone() + b.clone())).unwrap();
                ok &= sum == u.tangent_scale(a).unwrap().tangent_add(&u.tangent_scale(b).unwrap()).unwrap();
                let prod = u.tangent_scale(&(a.clone() * b.clone())).unwrap();
                ok &= prod == u.tangent_scale(b).unwrap().tangent_scale(a).unwrap();
                checked += 1;
            }
        }
    }
    let (a, b, c) = (&vs[5], &vs[10], &vs[15]);
    ok &= a.tangent_add(b).unwrap().tangent_add(c).unwrap() == a.tangent_add(&b.tangent_add(c).unwrap()).unwrap();
    (ok, format!("{checked} module-law instances"))
}

fn kaehler_tangent_dimensions() -> Outcome {
    let mut rows = Vec::new();
    let mut ok = true;
    for m in 1..=3 {
        for l in 0..=3 {
            let alg = WeilAlgebra::disk(m, l).unwrap();
            let k = KaehlerModule::new(&alg).dimension();
            let t = TangentSlice::new(&alg).unwrap().dimension();
            ok &= k == t;
            rows.push(format!("D({m},{l})={k}"));
        }
    }
    outcome(ok, rows.join(" "))
}

fn perturbative_expansion() -> Outcome {
    let e = perturb_expand(&parse("cos(x)").unwrap(), &[("x".to_string(), Expr::zero())], 4).unwrap();
    let exact = e.element.mode() == Mode::Rational && e.polynomial == parse("1 - h^2/2 + h^4/24").unwrap();
    let c = chart_covariance(&parse("cos(x)").unwrap(), &parse("x + x^2").unwrap(), "x", &Expr::zero(), 3).unwrap();
    outcome(exact && c.holds, format!("cos: {}; S o psi: {} = {}", e.polynomial, c.lhs, c.rhs))
}

fn chain_rule() -> Outcome {
    let ctx = JetContext::new(["t", "x"], ["u", "v"]).unwrap();
    let zero = ZeroTest::default();
    let mut s = Sampler::new(21);
    let mut passed = 0;
    for _ in 0..30 {
        let f = s.jet_expr(&ctx, 2, 3);
        let phi = Section::new(vec![s.smooth(ctx.coords(), 3), s.smooth(ctx.coords(), 3)]);
        let mu = s.int(0, 1) as usize;
        if ctx.chain_rule_identity(&f, &phi, mu, &zero).is_ok() {
            passed += 1;
        }
    }
    outcome(passed == 30, format!("{passed}/30"))
}
