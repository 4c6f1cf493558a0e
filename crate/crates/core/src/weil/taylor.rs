use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;

use super::algebra::WeilAlgebra;
use super::element::{Mode, WeilElement};
use super::WeilError;
use crate::expr::{Binding, Expr};

/// Truncated Taylor extension of `f` to Weil-valued arguments.
///
/// Each argument splits as scalar part `s_i` plus nilpotent part `n_i`; the
/// result is `Σ_{|I| <= l} ∂_I f(s) n^I / I!` in normal form. Numeric scalar
/// parts give rational (exact) or float coefficients; symbolic scalar parts
/// keep the derivatives symbolic. Variables of `f` not listed in `vars`
/// stay free in the coefficients.
pub fn taylor_extend<S: AsRef<str>>(f: &Expr, vars: &[S], args: &[WeilElement]) -> Result<WeilElement, WeilError> {
    let Some(first) = args.first() else {
        return Err(WeilError::Arity { expected: vars.len(), found: 0 });
    };
    let algebra = first.algebra().clone();
    taylor_extend_in(&algebra, f, vars, args)
}

/// As [`taylor_extend`], with the algebra given explicitly so that `args`
/// may be empty.
pub fn taylor_extend_in<S: AsRef<str>>(
    algebra: &Arc<WeilAlgebra>,
    f: &Expr,
    vars: &[S],
    args: &[WeilElement],
) -> Result<WeilElement, WeilError> {
    if vars.len() != args.len() {
        return Err(WeilError::Arity { expected: vars.len(), found: args.len() });
    }
    for a in args {
        if a.algebra() != algebra {
            return Err(WeilError::AlgebraMismatch(algebra.spec_string(), a.algebra().spec_string()));
        }
    }
    let vars: Vec<&str> = vars.iter().map(AsRef::as_ref).collect();
    let numeric = args.iter().all(|a| a.mode() != Mode::Symbolic);
    let scalars: Vec<Expr> = args.iter().map(WeilElement::scalar_part).collect();
    let nilpotent: Vec<WeilElement> = args.iter().map(WeilElement::nilpotent_part).collect();
    let active: Vec<usize> = (0..args.len()).filter(|&i| !nilpotent[i].is_zero()).collect();

    let point: BTreeMap<String, Expr> = vars.iter().map(|v| v.to_string()).zip(scalars).collect();
    let at_point = |d: &Expr| -> Result<Expr, WeilError> {
        let v = d.subs(&point);
        if !numeric || v.as_number().is_some() || !v.free_vars().is_empty() {
            return Ok(v);
        }
        Ok(Expr::float(v.eval(&Binding::new())?))
    };

    let mut walk = Walk {
        algebra,
        vars: &vars,
        nilpotent: &nilpotent,
        active: &active,
        at_point: &at_point,
        acc: WeilElement::zero(algebra),
    };
    let one = WeilElement::from_rational(algebra, BigRational::one());
    walk.visit(f, 0, 0, &one, BigRational::one(), 0)?;
    Ok(walk.acc)
}

struct Walk<'a> {
    algebra: &'a Arc<WeilAlgebra>,
    vars: &'a [&'a str],
    nilpotent: &'a [WeilElement],
    active: &'a [usize],
    at_point: &'a dyn Fn(&Expr) -> Result<Expr, WeilError>,
    acc: WeilElement,
}

impl Walk<'_> {
    /// Visits multi-indices in nondecreasing order of active variables.
    /// `start` is the smallest position allowed next, `run` the multiplicity
    /// of the last index, so `weight` accumulates `1/I!`.
    fn visit(
        &mut self,
        deriv: &Expr,
        depth: u32,
        start: usize,
        product: &WeilElement,
        weight: BigRational,
        run: u32,
    ) -> Result<(), WeilError> {
        if !deriv.is_zero() {
            let value = (self.at_point)(deriv)?;
            let term = product.scale_rational(&weight).scale(&value);
            self.acc = self.acc.add(&term)?;
        }
        if depth >= self.algebra.order() {
            return Ok(());
        }
        for pos in start..self.active.len() {
            let i = self.active[pos];
            let d = deriv.differentiate(self.vars[i]);
            if d.is_zero() {
                continue;
            }
            let p = product.mul(&self.nilpotent[i])?;
            if p.is_zero() {
                continue;
            }
            let k = if pos == start && depth > 0 { run + 1 } else { 1 };
            let w = &weight / BigRational::from_integer(k.into());
            self.visit(&d, depth + 1, pos, &p, w, k)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::weil::Coeffs;

    fn ext(alg: &Arc<WeilAlgebra>, f: &str, vars: &[&str], args: &[&str]) -> WeilElement {
        let args: Vec<WeilElement> = args.iter().map(|a| WeilElement::parse(alg, a).unwrap()).collect();
        taylor_extend_in(alg, &parse(f).unwrap(), vars, &args).unwrap()
    }

    #[test]
    fn exp_to_second_order() {
        let d = WeilAlgebra::disk(1, 2).unwrap();
        assert_eq!(ext(&d, "exp(x)", &["x"], &["e1"]).to_string(), "1 + e1 + 1/2*e1^2");
    }

    #[test]
    fn square_on_dual_numbers() {
        let d = WeilAlgebra::dual_numbers();
        assert_eq!(ext(&d, "x^2", &["x"], &["3 + e1"]).to_string(), "9 + 6*e1");
    }

    #[test]
    fn bilinear_leibniz_shape() {
        let d = WeilAlgebra::disk(2, 1).unwrap();
        let r = ext(&d, "x*y", &["x", "y"], &["a + e1", "b + e2"]);
        assert_eq!(r.to_string(), "a*b + b*e1 + a*e2");
    }

    #[test]
    fn mixed_multiplicities_carry_factorials() {
        // x^2*y at (0 + e1, 0 + e2) in D(2,3) is exactly e1^2*e2
        let d = WeilAlgebra::disk(2, 3).unwrap();
        assert_eq!(ext(&d, "x^2*y", &["x", "y"], &["e1", "e2"]).to_string(), "e1^2*e2");
        assert_eq!(ext(&d, "(x + y)^3", &["x", "y"], &["e1", "e2"]).to_string(), "e1^3 + 3*e1^2*e2 + 3*e1*e2^2 + e2^3");
    }

    #[test]
    fn transcendental_values_fall_back_to_floats() {
        let d = WeilAlgebra::dual_numbers();
        let r = ext(&d, "sin(x)", &["x"], &["1 + e1"]);
        let Coeffs::Float(v) = r.coeffs() else { panic!("expected float mode") };
        assert!((v[0] - 1f64.sin()).abs() < 1e-15);
        assert!((v[1] - 1f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn domain_error_at_numeric_point() {
        let d = WeilAlgebra::dual_numbers();
        let args = [WeilElement::parse(&d, "-1 + e1").unwrap()];
        assert!(matches!(
            taylor_extend(&parse("log(x)").unwrap(), &["x"], &args),
            Err(WeilError::Domain(_))
        ));
    }

    #[test]
    fn arguments_substitute_simultaneously() {
        let d = WeilAlgebra::dual_numbers();
        assert_eq!(ext(&d, "x - 2*y", &["x", "y"], &["y", "x + e1"]).to_string(), "-2*x + y - 2*e1");
    }

    #[test]
    fn symbolic_point() {
        let d = WeilAlgebra::dual_numbers();
        assert_eq!(ext(&d, "sin(x)", &["x"], &["x + e1"]).to_string(), "sin(x) + cos(x)*e1");
    }
}
