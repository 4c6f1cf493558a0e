use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::expr::{Expr, Node};

/// Exponent vector of an ε-monomial.
///
/// Ordered by total degree, then so that ε1 lists before ε2 within a
/// degree: `1 < e1 < e2 < e1^2 < e1*e2 < e2^2 < ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(m: usize) -> Self {
        Monomial(vec![0; m])
    }

    pub fn generator(m: usize, i: usize) -> Self {
        let mut e = vec![0; m];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `∂/∂ε_i` as (multiplicity, lowered monomial).
    pub fn derivative(&self, i: usize) -> Option<(u32, Monomial)> {
        let k = self.0[i];
        if k == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some((k, Monomial(e)))
    }

    pub fn to_expr(&self) -> Expr {
        Expr::mul(
            self.0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| Expr::powi(Expr::var(generator_name(i)), k as i64)),
        )
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &k) in self.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{}", generator_name(i))?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        Ok(())
    }
}

/// DSL name of the `i`-th (0-based) nilpotent generator: `e1`, `e2`, ...
pub fn generator_name(i: usize) -> String {
    format!("e{}", i + 1)
}

/// Inverse of [`generator_name`].
pub fn generator_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('e')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse::<usize>().ok().map(|k| k - 1)
}

/// All monomials in `m` variables of total degree exactly `d`, ascending.
pub fn monomials_of_degree(m: usize, d: u32) -> Vec<Monomial> {
    fn rec(m: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == m {
            cur.push(left);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(m, i + 1, left - k, cur, out);
            cur.pop();
        }
    }
    if m == 0 {
        return if d == 0 { vec![Monomial(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(m, 0, d, &mut Vec::new(), &mut out);
    out
}

/// All monomials of total degree at most `l`, ascending.
pub fn monomials_up_to(m: usize, l: u32) -> Vec<Monomial> {
    (0..=l).flat_map(|d| monomials_of_degree(m, d)).collect()
}

/// Polynomial in the ε generators with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub m: usize,
    pub terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(m: usize) -> Self {
        Poly { m, terms: BTreeMap::new() }
    }

    pub fn monomial(mono: Monomial) -> Self {
        let m = mono.0.len();
        let mut terms = BTreeMap::new();
        terms.insert(mono, BigRational::one());
        Poly { m, terms }
    }

    pub fn add_term(&mut self, mono: Monomial, c: BigRational) {
        let slot = self.terms.entry(mono.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&Monomial::one(self.m)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product, dropping monomials of degree above `cap`.
    pub fn mul_truncated(&self, other: &Poly, cap: u32) -> Poly {
        let mut out = Poly::zero(self.m);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let p = a.mul(b);
                if p.degree() <= cap {
                    out.add_term(p, ca * cb);
                }
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.m);
        for (mono, c) in &self.terms {
            if let Some((k, lowered)) = mono.derivative(i) {
                out.add_term(lowered, c * BigRational::from_integer(BigInt::from(k)));
            }
        }
        out
    }

    pub fn to_expr(&self) -> Expr {
        Expr::add(self.terms.iter().map(|(mono, c)| Expr::mul([Expr::rational(c.clone()), mono.to_expr()])))
    }

    /// Reads a polynomial in `e1..em` with rational coefficients.
    pub fn from_expr(e: &Expr, m: usize) -> Result<Poly, String> {
        let mut out = Poly::zero(m);
        for term in e.terms() {
            let (c, rest) = term.split_coefficient();
            let c = c.as_rational().cloned().ok_or_else(|| format!("non-rational coefficient in `{term}`"))?;
            let mut exps = vec![0u32; m];
            if let Some(rest) = rest {
                let factors = match rest.node() {
                    Node::Mul(_, fs) => fs.clone(),
                    _ => vec![rest.clone()],
                };
                for f in factors {
                    let (name, k) = match f.node() {
                        Node::Var(v) => (v.clone(), 1u32),
                        Node::Pow(b, k) if k.is_integer() && *k > BigRational::zero() => match b.node() {
                            Node::Var(v) => (v.clone(), k.to_integer().to_u32().ok_or("exponent too large")?),
                            _ => return Err(format!("`{f}` is not a monomial factor")),
                        },
                        _ => return Err(format!("`{f}` is not a monomial factor")),
                    };
                    let i = generator_index(&name)
                        .filter(|&i| i < m)
                        .ok_or_else(|| format!("unknown generator `{name}`"))?;
                    exps[i] += k;
                }
            }
            out.add_term(Monomial(exps), c);
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}
