use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::algebra::WeilAlgebra;
use super::monomial::{generator_index, generator_name, Monomial, Poly};
use super::WeilError;
use crate::expr::{rational_to_f64, Binding, Expr, Node, Number};

/// Coefficient ring for Weil-algebra arithmetic.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn from_rational(r: &BigRational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;

    fn mul_rational(&self, r: &BigRational) -> Self {
        self.mul(&Self::from_rational(r))
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_rational(r: &BigRational) -> Self {
        rational_to_f64(r)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

impl Scalar for Expr {
    fn zero() -> Self {
        Expr::zero()
    }
    fn from_rational(r: &BigRational) -> Self {
        Expr::rational(r.clone())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero(&self) -> bool {
        Expr::is_zero(self)
    }
    fn mul_rational(&self, r: &BigRational) -> Self {
        self.scale(&Number::Rational(r.clone()))
    }
}

/// Coefficient mode of an element, ordered by generality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Rational,
    Float,
    Symbolic,
}

/// Dense coefficients over the algebra's monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeffs {
    Rational(Vec<BigRational>),
    Float(Vec<f64>),
    Symbolic(Vec<Expr>),
}

impl Coeffs {
    pub fn mode(&self) -> Mode {
        match self {
            Coeffs::Rational(_) => Mode::Rational,
            Coeffs::Float(_) => Mode::Float,
            Coeffs::Symbolic(_) => Mode::Symbolic,
        }
    }

    fn promote(&self, mode: Mode) -> Coeffs {
        match (self, mode) {
            (c, m) if c.mode() >= m => c.clone(),
            (Coeffs::Rational(v), Mode::Float) => Coeffs::Float(v.iter().map(rational_to_f64).collect()),
            (Coeffs::Rational(v), Mode::Symbolic) => Coeffs::Symbolic(v.iter().map(|r| Expr::rational(r.clone())).collect()),
            (Coeffs::Float(v), Mode::Symbolic) => Coeffs::Symbolic(v.iter().map(|x| Expr::float(*x)).collect()),
            _ => unreachable!("promotion only goes up"),
        }
    }
}

fn mul_dense<S: Scalar>(alg: &WeilAlgebra, a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); alg.dim()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let xy = x.mul(y);
            for (k, c) in alg.product(i, j) {
                out[*k] = out[*k].add(&xy.mul_rational(c));
            }
        }
    }
    out
}

/// Element of a Weil algebra in normal form.
#[derive(Clone, Debug)]
pub struct WeilElement {
    algebra: Arc<WeilAlgebra>,
    coeffs: Coeffs,
}

impl WeilElement {
    pub fn from_coeffs(algebra: Arc<WeilAlgebra>, coeffs: Coeffs) -> Result<WeilElement, WeilError> {
        let len = match &coeffs {
            Coeffs::Rational(v) => v.len(),
            Coeffs::Float(v) => v.len(),
            Coeffs::Symbolic(v) => v.len(),
        };
        if len != algebra.dim() {
            return Err(WeilError::Arity { expected: algebra.dim(), found: len });
        }
        Ok(WeilElement { algebra, coeffs })
    }

    pub fn zero(algebra: &Arc<WeilAlgebra>) -> WeilElement {
        WeilElement { algebra: algebra.clone(), coeffs: Coeffs::Rational(vec![<BigRational as Zero>::zero(); algebra.dim()]) }
    }

    pub fn from_rational(algebra: &Arc<WeilAlgebra>, c: BigRational) -> WeilElement {
        let mut v = vec![<BigRational as Zero>::zero(); algebra.dim()];
        v[0] = c;
        WeilElement { algebra: algebra.clone(), coeffs: Coeffs::Rational(v) }
    }

    pub fn from_f64(algebra: &Arc<WeilAlgebra>, c: f64) -> WeilElement {
        let mut v = vec![0.0; algebra.dim()];
        v[0] = c;
        WeilElement { algebra: algebra.clone(), coeffs: Coeffs::Float(v) }
    }

    /// Constant element; exact rationals stay in rational mode.
    pub fn constant(algebra: &Arc<WeilAlgebra>, c: &Expr) -> WeilElement {
        match c.as_number() {
            Some(Number::Rational(r)) => WeilElement::from_rational(algebra, r),
            Some(Number::Float(x)) => WeilElement::from_f64(algebra, x),
            None => {
                let mut v = vec![Expr::zero(); algebra.dim()];
                v[0] = c.clone();
                WeilElement { algebra: algebra.clone(), coeffs: Coeffs::Symbolic(v) }
            }
        }
    }

    /// The generator `ε_i` (0-based), reduced.
    pub fn generator(algebra: &Arc<WeilAlgebra>, i: usize) -> Result<WeilElement, WeilError> {
        if i >= algebra.generators() {
            return Err(WeilError::UnknownGenerator(generator_name(i)));
        }
        let v = algebra.reduce(&Poly::monomial(Monomial::generator(algebra.generators(), i)));
        Ok(WeilElement { algebra: algebra.clone(), coeffs: Coeffs::Rational(v) })
    }

    pub fn from_poly(algebra: &Arc<WeilAlgebra>, p: &Poly) -> WeilElement {
        WeilElement { algebra: algebra.clone(), coeffs: Coeffs::Rational(algebra.reduce(p)) }
    }

    /// Reads an element from an expression in `e1..em`; any other variables
    /// become symbolic coefficients.
    pub fn from_expr(algebra: &Arc<WeilAlgebra>, e: &Expr) -> Result<WeilElement, WeilError> {
        let m = algebra.generators();
        for v in e.free_vars() {
            if let Some(i) = generator_index(&v) {
                if i >= m {
                    return Err(WeilError::UnknownGenerator(v));
                }
            }
        }
        let vars: Vec<String> = (0..m).map(generator_name).collect();
        let args: Vec<WeilElement> = (0..m).map(|i| WeilElement::generator(algebra, i)).collect::<Result<_, _>>()?;
        super::taylor::taylor_extend_in(algebra, e, &vars, &args)
    }

    pub fn parse(algebra: &Arc<WeilAlgebra>, text: &str) -> Result<WeilElement, WeilError> {
        WeilElement::from_expr(algebra, &crate::expr::parse(text)?)
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn mode(&self) -> Mode {
        self.coeffs.mode()
    }

    pub fn promote(&self, mode: Mode) -> WeilElement {
        WeilElement { algebra: self.algebra.clone(), coeffs: self.coeffs.promote(mode) }
    }

    /// Coefficients as expressions, whatever the mode.
    pub fn coeff_exprs(&self) -> Vec<Expr> {
        match self.coeffs.promote(Mode::Symbolic) {
            Coeffs::Symbolic(v) => v,
            _ => unreachable!(),
        }
    }

    pub fn coeff_expr(&self, i: usize) -> Expr {
        match &self.coeffs {
            Coeffs::Rational(v) => Expr::rational(v[i].clone()),
            Coeffs::Float(v) => Expr::float(v[i]),
            Coeffs::Symbolic(v) => v[i].clone(),
        }
    }

    /// Coefficient of a basis monomial; `None` if it is not a basis monomial.
    pub fn coefficient(&self, mono: &Monomial) -> Option<Expr> {
        self.algebra.basis_index(mono).map(|i| self.coeff_expr(i))
    }

    pub fn coeff_f64(&self, i: usize) -> Option<f64> {
        match &self.coeffs {
            Coeffs::Rational(v) => Some(rational_to_f64(&v[i])),
            Coeffs::Float(v) => Some(v[i]),
            Coeffs::Symbolic(v) => v[i].as_number().map(|n| n.to_f64()),
        }
    }

    pub fn scalar_part(&self) -> Expr {
        self.coeff_expr(0)
    }

    pub fn nilpotent_part(&self) -> WeilElement {
        let mut out = self.clone();
        match &mut out.coeffs {
            Coeffs::Rational(v) => v[0] = <BigRational as Zero>::zero(),
            Coeffs::Float(v) => v[0] = 0.0,
            Coeffs::Symbolic(v) => v[0] = Expr::zero(),
        }
        out
    }

    /// Structural zero test on every coefficient.
    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Rational(v) => v.iter().all(Zero::is_zero),
            Coeffs::Float(v) => v.iter().all(|x| *x == 0.0),
            Coeffs::Symbolic(v) => v.iter().all(Expr::is_zero),
        }
    }

    fn check_same(&self, other: &WeilElement) -> Result<(), WeilError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || self.algebra == other.algebra {
            Ok(())
        } else {
            Err(WeilError::AlgebraMismatch(self.algebra.spec_string(), other.algebra.spec_string()))
        }
    }

    fn binary(
        &self,
        other: &WeilElement,
        rat: impl Fn(&[BigRational], &[BigRational]) -> Vec<BigRational>,
        flt: impl Fn(&[f64], &[f64]) -> Vec<f64>,
        sym: impl Fn(&[Expr], &[Expr]) -> Vec<Expr>,
    ) -> Result<WeilElement, WeilError> {
        self.check_same(other)?;
        let mode = self.mode().max(other.mode());
        let coeffs = match (self.coeffs.promote(mode), other.coeffs.promote(mode)) {
            (Coeffs::Rational(a), Coeffs::Rational(b)) => Coeffs::Rational(rat(&a, &b)),
            (Coeffs::Float(a), Coeffs::Float(b)) => Coeffs::Float(flt(&a, &b)),
            (Coeffs::Symbolic(a), Coeffs::Symbolic(b)) => Coeffs::Symbolic(sym(&a, &b)),
            _ => unreachable!("promoted to a common mode"),
        };
        Ok(WeilElement { algebra: self.algebra.clone(), coeffs })
    }

    pub fn add(&self, other: &WeilElement) -> Result<WeilElement, WeilError> {
        fn add_vec<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
            a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
        }
        self.binary(other, add_vec, add_vec, add_vec)
    }

    pub fn sub(&self, other: &WeilElement) -> Result<WeilElement, WeilError> {
        self.add(&other.scale_rational(&-BigRational::one()))
    }

    pub fn mul(&self, other: &WeilElement) -> Result<WeilElement, WeilError> {
        let alg = self.algebra.clone();
        self.binary(
            other,
            |a, b| mul_dense(&alg, a, b),
            |a, b| mul_dense(&alg, a, b),
            |a, b| mul_dense(&alg, a, b),
        )
    }

    pub fn scale_rational(&self, c: &BigRational) -> WeilElement {
        let coeffs = match &self.coeffs {
            Coeffs::Rational(v) => Coeffs::Rational(v.iter().map(|x| x * c).collect()),
            Coeffs::Float(v) => Coeffs::Float(v.iter().map(|x| x * rational_to_f64(c)).collect()),
            Coeffs::Symbolic(v) => Coeffs::Symbolic(v.iter().map(|x| x.mul_rational(c)).collect()),
        };
        WeilElement { algebra: self.algebra.clone(), coeffs }
    }

    /// Multiplication by a scalar expression; promotes the mode as needed.
    pub fn scale(&self, c: &Expr) -> WeilElement {
        match c.as_number() {
            Some(Number::Rational(r)) => self.scale_rational(&r),
            Some(Number::Float(x)) => match self.coeffs.promote(self.mode().max(Mode::Float)) {
                Coeffs::Float(v) => WeilElement { algebra: self.algebra.clone(), coeffs: Coeffs::Float(v.iter().map(|y| y * x).collect()) },
                Coeffs::Symbolic(v) => WeilElement { algebra: self.algebra.clone(), coeffs: Coeffs::Symbolic(v.iter().map(|y| y * c).collect()) },
                Coeffs::Rational(_) => unreachable!(),
            },
            None => WeilElement {
                algebra: self.algebra.clone(),
                coeffs: Coeffs::Symbolic(self.coeff_exprs().iter().map(|y| y * c).collect()),
            },
        }
    }

    pub fn neg(&self) -> WeilElement {
        self.scale_rational(&-BigRational::one())
    }

    pub fn powi(&self, k: u32) -> Result<WeilElement, WeilError> {
        let mut acc = match self.mode() {
            Mode::Rational => WeilElement::from_rational(&self.algebra, BigRational::one()),
            Mode::Float => WeilElement::from_f64(&self.algebra, 1.0),
            Mode::Symbolic => WeilElement::constant(&self.algebra, &Expr::one()).promote(Mode::Symbolic),
        };
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient expression and re-reads the mode.
    pub fn map_coeffs(&self, f: impl Fn(&Expr) -> Expr) -> WeilElement {
        let v: Vec<Expr> = self.coeff_exprs().iter().map(f).collect();
        WeilElement { algebra: self.algebra.clone(), coeffs: Coeffs::Symbolic(v) }.demote()
    }

    /// Numeric evaluation of symbolic coefficients.
    pub fn eval(&self, binding: &Binding) -> Result<WeilElement, WeilError> {
        let v = self.coeff_exprs().iter().map(|c| c.eval(binding)).collect::<Result<Vec<f64>, _>>()?;
        Ok(WeilElement { algebra: self.algebra.clone(), coeffs: Coeffs::Float(v) })
    }

    /// Moves symbolic coefficients down to rational or float mode when they
    /// are all constants.
    pub fn demote(self) -> WeilElement {
        let Coeffs::Symbolic(v) = &self.coeffs else { return self };
        let nums: Option<Vec<Number>> = v.iter().map(Expr::as_number).collect();
        let Some(nums) = nums else { return self };
        let coeffs = if nums.iter().all(|n| n.as_rational().is_some()) {
            Coeffs::Rational(nums.into_iter().map(|n| n.as_rational().unwrap().clone()).collect())
        } else {
            Coeffs::Float(nums.iter().map(Number::to_f64).collect())
        };
        WeilElement { algebra: self.algebra, coeffs }
    }

    /// The element as an expression in the generator names `e1..em`.
    pub fn to_expr(&self) -> Expr {
        Expr::add(
            self.coeff_exprs()
                .into_iter()
                .zip(self.algebra.basis())
                .map(|(c, mono)| Expr::mul([c, mono.to_expr()])),
        )
    }
}

impl PartialEq for WeilElement {
    fn eq(&self, other: &Self) -> bool {
        if self.check_same(other).is_err() {
            return false;
        }
        let mode = self.mode().max(other.mode());
        self.coeffs.promote(mode) == other.coeffs.promote(mode)
    }
}

/// Prints `c0 + c1*e1 + ...` in basis order, grouping each coefficient.
impl fmt::Display for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (c, mono) in self.coeff_exprs().into_iter().zip(self.algebra.basis()) {
            if c.is_zero() {
                continue;
            }
            let compound = matches!(c.node(), Node::Add(_));
            let (neg, body) = match c.as_number() {
                Some(n) if n.is_negative() => (true, Expr::num(n.neg())),
                _ => match c.node() {
                    Node::Mul(k, _) if k.is_negative() => (true, c.neg()),
                    _ => (false, c.clone()),
                },
            };
            let text = if mono.is_one() {
                body.to_string()
            } else if body.is_one() {
                mono.to_string()
            } else if compound {
                format!("({body})*{mono}")
            } else {
                format!("{body}*{mono}")
            };
            parts.push((neg, text));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        for (i, (neg, text)) in parts.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ModeRepr {
    Rational,
    Float,
    Symbolic,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementRepr {
    algebra: WeilAlgebra,
    mode: ModeRepr,
    coeffs: Vec<Expr>,
}

/// `{"algebra": ..., "mode": "rational"|"float"|"symbolic", "coeffs": [expr, ...]}`
/// with one coefficient per basis monomial, in basis order.
impl Serialize for WeilElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mode = match self.mode() {
            Mode::Rational => ModeRepr::Rational,
            Mode::Float => ModeRepr::Float,
            Mode::Symbolic => ModeRepr::Symbolic,
        };
        ElementRepr { algebra: (*self.algebra).clone(), mode, coeffs: self.coeff_exprs() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeilElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<WeilElement, D::Error> {
        use serde::de::Error;
        let repr = ElementRepr::deserialize(d)?;
        let algebra = Arc::new(repr.algebra);
        let coeffs = match repr.mode {
            ModeRepr::Rational => Coeffs::Rational(
                repr.coeffs
                    .iter()
                    .map(|c| c.as_rational().ok_or_else(|| D::Error::custom(format!("`{c}` is not rational"))))
                    .collect::<Result<_, _>>()?,
            ),
            ModeRepr::Float => Coeffs::Float(
                repr.coeffs
                    .iter()
                    .map(|c| c.as_number().map(|n| n.to_f64()).ok_or_else(|| D::Error::custom(format!("`{c}` is not a number"))))
                    .collect::<Result<_, _>>()?,
            ),
            ModeRepr::Symbolic => Coeffs::Symbolic(repr.coeffs),
        };
        WeilElement::from_coeffs(algebra, coeffs).map_err(D::Error::custom)
    }
}
