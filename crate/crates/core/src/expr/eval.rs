use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use thiserror::Error;

use super::{rational_to_f64, Expr, Func, Node};

/// Variable assignment for numeric evaluation.
pub type Binding = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero")]
    DivisionByZero,
}

pub(super) fn apply_f64(func: Func, x: f64) -> Result<f64, EvalError> {
    let v = match func {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => {
            if x.cos() == 0.0 {
                return Err(EvalError::Domain(format!("tan({x})")));
            }
            x.tan()
        }
        Func::Exp => x.exp(),
        Func::Log => {
            if x <= 0.0 {
                return Err(EvalError::Domain(format!("log({x})")));
            }
            x.ln()
        }
        Func::Sqrt => {
            if x < 0.0 {
                return Err(EvalError::Domain(format!("sqrt({x})")));
            }
            x.sqrt()
        }
        Func::Atan => x.atan(),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Domain(format!("{}({x}) is not finite", func.name())))
    }
}

pub(super) fn eval(e: &Expr, b: &Binding) -> Result<f64, EvalError> {
    match e.node() {
        Node::Num(n) => Ok(n.to_f64()),
        Node::Var(v) => b.get(v).copied().ok_or_else(|| EvalError::Unbound(v.clone())),
        Node::Add(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += eval(t, b)?;
            }
            Ok(acc)
        }
        Node::Mul(c, fs) => {
            let mut acc = c.to_f64();
            for f in fs {
                acc *= eval(f, b)?;
            }
            Ok(acc)
        }
        Node::Pow(base, k) => {
            let x = eval(base, b)?;
            if k.is_integer() {
                let n = k.to_integer().to_i32().ok_or_else(|| EvalError::Domain("exponent overflow".into()))?;
                if x == 0.0 && n < 0 {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(x.powi(n))
            } else {
                if x < 0.0 {
                    return Err(EvalError::Domain(format!("({x})^({k})")));
                }
                if x == 0.0 && k < &num_rational::BigRational::from_integer(0.into()) {
                    return Err(EvalError::DivisionByZero);
                }
                Ok(x.powf(rational_to_f64(k)))
            }
        }
        Node::Apply(f, a) => apply_f64(*f, eval(a, b)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn bind(pairs: &[(&str, f64)]) -> Binding {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn square_at_three() {
        assert_eq!(parse("x^2").unwrap().eval(&bind(&[("x", 3.0)])), Ok(9.0));
    }

    #[test]
    fn sin_at_zero() {
        assert_eq!(parse("sin(x)").unwrap().eval(&bind(&[("x", 0.0)])), Ok(0.0));
    }

    #[test]
    fn log_at_zero_is_domain_error() {
        let r = parse("log(x)").unwrap().eval(&bind(&[("x", 0.0)]));
        assert!(matches!(r, Err(EvalError::Domain(_))));
    }

    #[test]
    fn reciprocal_of_zero() {
        let r = parse("1/x").unwrap().eval(&bind(&[("x", 0.0)]));
        assert_eq!(r, Err(EvalError::DivisionByZero));
    }

    #[test]
    fn unbound_variable_reported() {
        let r = parse("x + y").unwrap().eval(&bind(&[("x", 1.0)]));
        assert_eq!(r, Err(EvalError::Unbound("y".into())));
    }
}
