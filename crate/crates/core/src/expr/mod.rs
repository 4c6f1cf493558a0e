//! Symbolic scalar expressions.
//!
//! Every [`Expr`] is kept in canonical form by its smart constructors:
//! sums are flattened with like terms combined, products are expanded over
//! sums, factors are sorted by a fixed total order, and zero coefficients are
//! dropped. Simplification is structural only; no trigonometric or
//! logarithmic identities are applied. Semantic zero testing lives in
//! [`zero`].

mod canon;
mod diff;
mod eval;
pub mod json;
mod number;
pub(crate) mod parse;
mod print;
pub mod zero;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use eval::{Binding, EvalError};
pub use number::{rational_to_f64, Number};
pub use parse::{parse, ParseError};
pub use zero::{ZeroTest, ZeroVerdict};

/// Elementary functions understood by the DSL.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Atan,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

/// Expression node. Construct through [`Expr`]'s constructors, which keep
/// the tree canonical.
#[derive(Debug)]
pub enum Node {
    Num(Number),
    Var(String),
    /// At least two terms, none of them a sum or zero.
    Add(Vec<Expr>),
    /// Nonzero coefficient and sorted non-numeric factors.
    Mul(Number, Vec<Expr>),
    /// Exponent other than 0 and 1.
    Pow(Expr, BigRational),
    Apply(Func, Expr),
}

/// Immutable, cheaply clonable canonical expression.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl Expr {
    pub(crate) fn from_node(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    /// The canonical zero: an empty sum.
    pub fn zero() -> Expr {
        Expr::from_node(Node::Add(Vec::new()))
    }

    pub fn one() -> Expr {
        Expr::num(Number::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(Number::int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Expr {
        Expr::num(Number::ratio(num, den))
    }

    pub fn rational(r: BigRational) -> Expr {
        Expr::num(Number::Rational(r))
    }

    pub fn float(v: f64) -> Expr {
        Expr::num(Number::Float(v))
    }

    pub fn num(n: Number) -> Expr {
        if n.is_zero() {
            Expr::zero()
        } else {
            Expr::from_node(Node::Num(n))
        }
    }

    pub fn var(name: impl Into<String>) -> Expr {
        Expr::from_node(Node::Var(name.into()))
    }

    pub fn add(terms: impl IntoIterator<Item = Expr>) -> Expr {
        canon::add(terms)
    }

    pub fn mul(factors: impl IntoIterator<Item = Expr>) -> Expr {
        canon::mul(factors)
    }

    pub fn pow(base: Expr, exp: BigRational) -> Expr {
        canon::pow(base, exp)
    }

    pub fn powi(base: Expr, exp: i64) -> Expr {
        canon::pow(base, BigRational::from_integer(BigInt::from(exp)))
    }

    pub fn apply(func: Func, arg: Expr) -> Expr {
        canon::apply(func, arg)
    }

    pub fn neg(&self) -> Expr {
        self.scale(&Number::int(-1))
    }

    pub fn scale(&self, c: &Number) -> Expr {
        canon::mul([Expr::num(c.clone()), self.clone()])
    }

    pub fn recip(&self) -> Expr {
        Expr::powi(self.clone(), -1)
    }

    /// Rebuilds the tree bottom-up through the canonicalizing constructors.
    pub fn canonicalize(&self) -> Expr {
        match self.node() {
            Node::Num(n) => Expr::num(n.clone()),
            Node::Var(v) => Expr::var(v.clone()),
            Node::Add(ts) => Expr::add(ts.iter().map(Expr::canonicalize)),
            Node::Mul(c, fs) => Expr::mul(
                std::iter::once(Expr::num(c.clone())).chain(fs.iter().map(Expr::canonicalize)),
            ),
            Node::Pow(b, e) => Expr::pow(b.canonicalize(), e.clone()),
            Node::Apply(f, a) => Expr::apply(*f, a.canonicalize()),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.node(), Node::Add(ts) if ts.is_empty())
    }

    pub fn is_one(&self) -> bool {
        matches!(self.node(), Node::Num(n) if n.is_one())
    }

    /// The numeric value when the expression is a constant.
    pub fn as_number(&self) -> Option<Number> {
        match self.node() {
            Node::Num(n) => Some(n.clone()),
            Node::Add(ts) if ts.is_empty() => Some(Number::zero()),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.as_number()? {
            Number::Rational(r) => Some(r),
            Number::Float(_) => None,
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self.node() {
            Node::Var(v) => Some(v),
            _ => None,
        }
    }

    /// True when no float constants occur anywhere in the tree.
    pub fn is_exact(&self) -> bool {
        match self.node() {
            Node::Num(n) => n.as_rational().is_some(),
            Node::Var(_) => true,
            Node::Add(ts) => ts.iter().all(Expr::is_exact),
            Node::Mul(c, fs) => c.as_rational().is_some() && fs.iter().all(Expr::is_exact),
            Node::Pow(b, _) => b.is_exact(),
            Node::Apply(_, a) => a.is_exact(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self.node() {
            Node::Num(_) => {}
            Node::Var(v) => {
                out.insert(v.clone());
            }
            Node::Add(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Node::Mul(_, fs) => fs.iter().for_each(|t| t.collect_vars(out)),
            Node::Pow(b, _) => b.collect_vars(out),
            Node::Apply(_, a) => a.collect_vars(out),
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self.node() {
            Node::Num(_) => false,
            Node::Var(v) => v == name,
            Node::Add(ts) | Node::Mul(_, ts) => ts.iter().any(|t| t.contains_var(name)),
            Node::Pow(b, _) => b.contains_var(name),
            Node::Apply(_, a) => a.contains_var(name),
        }
    }

    /// Simultaneous substitution of variables, re-canonicalized.
    pub fn subs(&self, map: &BTreeMap<String, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        self.subs_with(&|name| map.get(name).cloned())
    }

    pub fn subs_var(&self, name: &str, value: &Expr) -> Expr {
        self.subs_with(&|n| (n == name).then(|| value.clone()))
    }

    pub fn subs_with(&self, f: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self.node() {
            Node::Num(_) => self.clone(),
            Node::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Node::Add(ts) => Expr::add(ts.iter().map(|t| t.subs_with(f))),
            Node::Mul(c, fs) => Expr::mul(
                std::iter::once(Expr::num(c.clone())).chain(fs.iter().map(|t| t.subs_with(f))),
            ),
            Node::Pow(b, e) => Expr::pow(b.subs_with(f), e.clone()),
            Node::Apply(func, a) => Expr::apply(*func, a.subs_with(f)),
        }
    }

    /// Renames variables; names without an entry are kept.
    pub fn rename(&self, f: &dyn Fn(&str) -> Option<String>) -> Expr {
        self.subs_with(&|n| f(n).map(Expr::var))
    }

    /// Terms of the top-level sum (a single term for non-sums, none for 0).
    pub fn terms(&self) -> Vec<Expr> {
        match self.node() {
            Node::Add(ts) => ts.clone(),
            _ => vec![self.clone()],
        }
    }

    /// Splits a term into its numeric coefficient and the remaining
    /// monomial (`None` for a pure constant).
    pub fn split_coefficient(&self) -> (Number, Option<Expr>) {
        canon::split_coeff(self)
    }

    pub fn differentiate(&self, var: &str) -> Expr {
        diff::differentiate(self, var)
    }

    pub fn eval(&self, binding: &Binding) -> Result<f64, EvalError> {
        eval::eval(self, binding)
    }

    fn kind_rank(&self) -> u8 {
        match self.node() {
            Node::Num(_) => 0,
            Node::Var(_) => 1,
            Node::Pow(..) => 2,
            Node::Apply(..) => 3,
            Node::Mul(..) => 4,
            Node::Add(_) => 5,
        }
    }
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Expr {}

impl PartialOrd for Expr {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order on canonical trees: node kind first, then
/// contents lexicographically.
impl Ord for Expr {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        let rank = self.kind_rank().cmp(&other.kind_rank());
        if rank != Ordering::Equal {
            return rank;
        }
        match (self.node(), other.node()) {
            (Node::Num(a), Node::Num(b)) => a.cmp(b),
            (Node::Var(a), Node::Var(b)) => a.cmp(b),
            (Node::Add(a), Node::Add(b)) => a.cmp(b),
            (Node::Mul(ca, fa), Node::Mul(cb, fb)) => fa.cmp(fb).then_with(|| ca.cmp(cb)),
            (Node::Pow(ba, ea), Node::Pow(bb, eb)) => ba.cmp(bb).then_with(|| ea.cmp(eb)),
            (Node::Apply(fa, aa), Node::Apply(fb, ab)) => fa.cmp(fb).then_with(|| aa.cmp(ab)),
            _ => unreachable!("kind ranks matched"),
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({})", self)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::to_string(self))
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add([self, rhs])
    }
}

impl std::ops::Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::add([self.clone(), rhs.clone()])
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::add([self, rhs.neg()])
    }
}

impl std::ops::Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::add([self.clone(), rhs.neg()])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul([self, rhs])
    }
}

impl std::ops::Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::mul([self.clone(), rhs.clone()])
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(&self)
    }
}

impl std::ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        parse(s).unwrap()
    }

    #[test]
    fn like_terms_combine() {
        assert!(p("x - x").is_zero());
        assert_eq!(p("2*x + 3*x"), p("5*x"));
        assert_eq!(p("x*y + y*x"), p("2*x*y"));
    }

    #[test]
    fn products_expand_over_sums() {
        assert_eq!(p("(x+1)*(x-1)"), p("x^2 - 1"));
        assert_eq!(p("(a+b)^2"), p("a^2 + 2*a*b + b^2"));
    }

    #[test]
    fn powers_of_same_base_merge() {
        assert_eq!(p("x^2*x^-1"), p("x"));
        assert_eq!(p("x*x^-1"), Expr::one());
        assert_eq!(p("(x^2)^3"), p("x^6"));
        assert_eq!(p("(2*x)^2"), p("4*x^2"));
    }

    #[test]
    fn trig_identity_is_not_simplified() {
        let e = p("sin(x)^2 + cos(x)^2");
        assert_eq!(e.terms().len(), 2);
    }

    #[test]
    fn decimals_become_exact_rationals() {
        assert_eq!(p("0.5"), Expr::ratio(1, 2));
        assert_eq!(p("0.5*(u_t^2 - u_x^2)").terms().len(), 2);
    }

    #[test]
    fn special_values_fold() {
        assert_eq!(p("exp(0)"), Expr::one());
        assert_eq!(p("cos(0) + sin(0)"), Expr::one());
        assert!(p("log(1)").is_zero());
    }

    #[test]
    fn canonicalize_is_idempotent_on_samples() {
        for s in ["x*y*sin(x+y)^-2", "exp(x)*(1+x)^3 - 2", "sqrt(x^2+1)/atan(y)"] {
            let e = p(s);
            assert_eq!(e.canonicalize(), e);
        }
    }

    #[test]
    fn subs_is_simultaneous() {
        let e = p("x + 2*y");
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), p("y"));
        map.insert("y".to_string(), p("x"));
        assert_eq!(e.subs(&map), p("y + 2*x"));
    }
}
