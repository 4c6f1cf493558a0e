//! JSON form of expressions: one object per node, tagged by `"op"`.
//! Rational constants are `{"num": .., "den": ..}`; integers that do not fit
//! in an `i64` are written as decimal strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Expr, Func, Node, Number};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn from_big(n: &BigInt) -> IntRepr {
        match n.to_i64() {
            Some(v) => IntRepr::Small(v),
            None => IntRepr::Big(n.to_string()),
        }
    }

    fn to_big<E: serde::de::Error>(&self) -> Result<BigInt, E> {
        match self {
            IntRepr::Small(v) => Ok(BigInt::from(*v)),
            IntRepr::Big(s) => s.parse().map_err(|_| E::custom(format!("invalid integer `{s}`"))),
        }
    }
}

/// Exact rational as `{"num": n, "den": d}`.
#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: IntRepr,
    den: IntRepr,
}

pub mod rational {
    //! `#[serde(with = ...)]` helper for `BigRational` fields.
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr { num: IntRepr::from_big(r.numer()), den: IntRepr::from_big(r.denom()) }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let repr = RationalRepr::deserialize(d)?;
        let den = repr.den.to_big()?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(repr.num.to_big()?, den))
    }
}

#[derive(Serialize, Deserialize)]
struct Wrapped(#[serde(with = "rational")] BigRational);

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumberRepr {
    Rational(Wrapped),
    Float(f64),
}

#[derive(Serialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum ExprRepr {
    Num {
        #[serde(with = "rational")]
        value: BigRational,
    },
    Float {
        value: f64,
    },
    Var {
        name: String,
    },
    Add {
        terms: Vec<Expr>,
    },
    Mul {
        coeff: NumberRepr,
        factors: Vec<Expr>,
    },
    Pow {
        base: Expr,
        #[serde(with = "rational")]
        exp: BigRational,
    },
    Apply {
        #[serde(rename = "fn")]
        func: String,
        arg: Expr,
    },
}

fn number_repr(n: &Number) -> NumberRepr {
    match n {
        Number::Rational(r) => NumberRepr::Rational(Wrapped(r.clone())),
        Number::Float(v) => NumberRepr::Float(*v),
    }
}

impl Serialize for Expr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self.node() {
            Node::Num(Number::Rational(r)) => ExprRepr::Num { value: r.clone() },
            Node::Num(Number::Float(v)) => ExprRepr::Float { value: *v },
            Node::Var(v) => ExprRepr::Var { name: v.clone() },
            Node::Add(ts) => ExprRepr::Add { terms: ts.clone() },
            Node::Mul(c, fs) => ExprRepr::Mul { coeff: number_repr(c), factors: fs.clone() },
            Node::Pow(b, e) => ExprRepr::Pow { base: b.clone(), exp: e.clone() },
            Node::Apply(f, a) => ExprRepr::Apply { func: f.name().to_string(), arg: a.clone() },
        };
        repr.serialize(s)
    }
}

// Fields are read straight off the map (no buffering) so that errors
// inside nested nodes keep their JSON path.
impl<'de> Deserialize<'de> for Expr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Expr, D::Error> {
        d.deserialize_map(ExprVisitor)
    }
}

struct ExprVisitor;

#[derive(Default)]
struct Fields {
    op: Option<String>,
    value: Option<NumberRepr>,
    name: Option<String>,
    terms: Option<Vec<Expr>>,
    coeff: Option<NumberRepr>,
    factors: Option<Vec<Expr>>,
    base: Option<Expr>,
    exp: Option<Wrapped>,
    func: Option<String>,
    arg: Option<Expr>,
}

fn required<T, E: serde::de::Error>(v: Option<T>, field: &'static str) -> Result<T, E> {
    v.ok_or_else(|| E::missing_field(field))
}

impl<'de> serde::de::Visitor<'de> for ExprVisitor {
    type Value = Expr;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("an expression node object with an \"op\" field")
    }

    fn visit_map<A: serde::de::MapAccess<'de>>(self, mut map: A) -> Result<Expr, A::Error> {
        use serde::de::Error;
        const FIELDS: &[&str] = &["op", "value", "name", "terms", "coeff", "factors", "base", "exp", "fn", "arg"];
        let mut f = Fields::default();
        while let Some(key) = map.next_key::<String>()? {
            match key.as_str() {
                "op" => f.op = Some(map.next_value()?),
                "value" => f.value = Some(map.next_value()?),
                "name" => f.name = Some(map.next_value()?),
                "terms" => f.terms = Some(map.next_value()?),
                "coeff" => f.coeff = Some(map.next_value()?),
                "factors" => f.factors = Some(map.next_value()?),
                "base" => f.base = Some(map.next_value()?),
                "exp" => f.exp = Some(map.next_value()?),
                "fn" => f.func = Some(map.next_value()?),
                "arg" => f.arg = Some(map.next_value()?),
                other => return Err(A::Error::unknown_field(other, FIELDS)),
            }
        }
        let op = required(f.op, "op")?;
        Ok(match op.as_str() {
            "num" => match required(f.value, "value")? {
                NumberRepr::Rational(Wrapped(r)) => Expr::rational(r),
                NumberRepr::Float(_) => return Err(A::Error::custom("`num` expects {\"num\", \"den\"}")),
            },
            "float" => match required(f.value, "value")? {
                NumberRepr::Float(v) => Expr::float(v),
                NumberRepr::Rational(_) => return Err(A::Error::custom("`float` expects a number")),
            },
            "var" => Expr::var(required(f.name, "name")?),
            "add" => Expr::add(required(f.terms, "terms")?),
            "mul" => {
                let c = match required(f.coeff, "coeff")? {
                    NumberRepr::Rational(Wrapped(r)) => Number::Rational(r),
                    NumberRepr::Float(v) => Number::Float(v),
                };
                Expr::mul(std::iter::once(Expr::num(c)).chain(required(f.factors, "factors")?))
            }
            "pow" => Expr::pow(required(f.base, "base")?, required(f.exp, "exp")?.0),
            "apply" => {
                let name = required(f.func, "fn")?;
                let func =
                    Func::from_name(&name).ok_or_else(|| A::Error::custom(format!("unknown function `{name}`")))?;
                Expr::apply(func, required(f.arg, "arg")?)
            }
            other => {
                return Err(A::Error::unknown_variant(
                    other,
                    &["num", "float", "var", "add", "mul", "pow", "apply"],
                ))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::json::{from_json_str, JsonError};

    #[test]
    fn round_trip_is_structural_identity() {
        for s in ["0.5*(u_t^2 - u_x^2)", "exp(sin(x))^-2*y^(1/3)", "123456789012345678901234567890/7*x"] {
            let e = parse(s).unwrap();
            let text = serde_json::to_string(&e).unwrap();
            let back: Expr = from_json_str(&text).unwrap();
            assert_eq!(back, e);
        }
    }

    #[test]
    fn float_constants_keep_full_precision() {
        let e = Expr::mul([Expr::float(0.1 + 0.2), Expr::var("x")]);
        let back: Expr = from_json_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn schema_violation_reports_path() {
        let err: JsonError = from_json_str::<Expr>(r#"{"op":"add","terms":[{"op":"var","nam":"x"}]}"#).unwrap_err();
        assert!(err.path.starts_with("terms"), "{}", err.path);
    }
}
