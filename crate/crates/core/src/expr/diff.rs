use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{Expr, Func, Node, Number};

pub(super) fn differentiate(e: &Expr, var: &str) -> Expr {
    if !e.contains_var(var) {
        return Expr::zero();
    }
    match e.node() {
        Node::Num(_) => Expr::zero(),
        Node::Var(v) => {
            if v == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(ts) => Expr::add(ts.iter().map(|t| differentiate(t, var))),
        Node::Mul(c, fs) => {
            // product rule over the factor list
            let mut terms = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let df = differentiate(f, var);
                if df.is_zero() {
                    continue;
                }
                let mut factors = Vec::with_capacity(fs.len() + 1);
                factors.push(Expr::num(c.clone()));
                factors.push(df);
                factors.extend(fs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()));
                terms.push(Expr::mul(factors));
            }
            Expr::add(terms)
        }
        Node::Pow(b, k) => {
            let db = differentiate(b, var);
            let lowered = Expr::pow(b.clone(), k - BigRational::one());
            Expr::mul([Expr::rational(k.clone()), lowered, db])
        }
        Node::Apply(f, a) => {
            let da = differentiate(a, var);
            let outer = match f {
                Func::Sin => Expr::apply(Func::Cos, a.clone()),
                Func::Cos => Expr::apply(Func::Sin, a.clone()).neg(),
                // 1 + tan(a)^2
                Func::Tan => Expr::add([Expr::one(), Expr::powi(Expr::apply(Func::Tan, a.clone()), 2)]),
                Func::Exp => Expr::apply(Func::Exp, a.clone()),
                Func::Log => a.recip(),
                Func::Sqrt => Expr::apply(Func::Sqrt, a.clone())
                    .recip()
                    .scale(&Number::Rational(BigRational::new(BigInt::from(1), BigInt::from(2)))),
                Func::Atan => Expr::add([Expr::one(), Expr::powi(a.clone(), 2)]).recip(),
            };
            Expr::mul([outer, da])
        }
    }
}
