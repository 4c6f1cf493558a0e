use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Expr, Func, Node, Number};

/// Largest positive integer power of a sum that is expanded.
const MAX_EXPAND_POWER: i64 = 32;

pub(super) fn split_coeff(term: &Expr) -> (Number, Option<Expr>) {
    match term.node() {
        Node::Num(n) => (n.clone(), None),
        Node::Add(ts) if ts.is_empty() => (Number::zero(), None),
        Node::Mul(c, fs) => {
            let rest = if fs.len() == 1 {
                fs[0].clone()
            } else {
                Expr::from_node(Node::Mul(Number::one(), fs.clone()))
            };
            (c.clone(), Some(rest))
        }
        _ => (Number::one(), Some(term.clone())),
    }
}

fn make_term(c: Number, rest: Expr) -> Expr {
    if c.is_one() {
        return rest;
    }
    match rest.node() {
        Node::Mul(_, fs) => Expr::from_node(Node::Mul(c, fs.clone())),
        _ => Expr::from_node(Node::Mul(c, vec![rest])),
    }
}

pub(super) fn add(terms: impl IntoIterator<Item = Expr>) -> Expr {
    let mut constant = Number::zero();
    let mut collected: BTreeMap<Expr, Number> = BTreeMap::new();
    let mut push = |t: &Expr| {
        let (c, rest) = split_coeff(t);
        match rest {
            None => constant = constant.add(&c),
            Some(r) => {
                let slot = collected.entry(r).or_insert_with(Number::zero);
                *slot = slot.add(&c);
            }
        }
    };
    for t in terms {
        match t.node() {
            Node::Add(ts) => ts.iter().for_each(&mut push),
            _ => push(&t),
        }
    }
    let mut out = Vec::with_capacity(collected.len() + 1);
    if !constant.is_zero() {
        out.push(Expr::from_node(Node::Num(constant)));
    }
    for (rest, c) in collected {
        if !c.is_zero() {
            out.push(make_term(c, rest));
        }
    }
    match out.len() {
        0 => Expr::zero(),
        1 => out.pop().unwrap(),
        _ => Expr::from_node(Node::Add(out)),
    }
}

pub(super) fn mul(factors: impl IntoIterator<Item = Expr>) -> Expr {
    let mut coeff = Number::one();
    let mut bases: BTreeMap<Expr, BigRational> = BTreeMap::new();
    let insert = |g: &Expr, bases: &mut BTreeMap<Expr, BigRational>| match g.node() {
        Node::Pow(b, e) => {
            let slot = bases.entry(b.clone()).or_insert_with(BigRational::zero);
            *slot += e;
        }
        _ => {
            let slot = bases.entry(g.clone()).or_insert_with(BigRational::zero);
            *slot += BigRational::one();
        }
    };
    for f in factors {
        match f.node() {
            Node::Num(n) => coeff = coeff.mul(n),
            Node::Add(ts) if ts.is_empty() => return Expr::zero(),
            Node::Mul(c, fs) => {
                coeff = coeff.mul(c);
                for g in fs {
                    insert(g, &mut bases);
                }
            }
            _ => insert(&f, &mut bases),
        }
    }
    if coeff.is_zero() {
        return Expr::zero();
    }

    let mut plain: Vec<Expr> = Vec::new();
    let mut sums: Vec<Expr> = Vec::new();
    let mut redo = false;
    for (b, e) in bases {
        if e.is_zero() {
            continue;
        }
        if matches!(b.node(), Node::Add(_)) && e.is_integer() && e.is_positive() {
            if let Some(k) = e.to_integer().to_i64().filter(|k| *k <= MAX_EXPAND_POWER) {
                sums.extend(std::iter::repeat_n(b, k as usize));
                continue;
            }
        }
        let r = if e.is_one() { b } else { pow(b, e) };
        match r.node() {
            Node::Add(ts) if ts.is_empty() => return Expr::zero(),
            Node::Add(_) => sums.push(r),
            Node::Num(_) | Node::Mul(..) => {
                redo = true;
                plain.push(r);
            }
            _ => plain.push(r),
        }
    }
    if redo {
        let all = std::iter::once(Expr::num(coeff))
            .chain(plain)
            .chain(sums);
        return mul(all);
    }
    plain.sort();

    let head = if plain.is_empty() {
        Expr::num(coeff)
    } else if coeff.is_one() && plain.len() == 1 {
        plain.pop().unwrap()
    } else {
        Expr::from_node(Node::Mul(coeff, plain))
    };
    if sums.is_empty() {
        return head;
    }
    sums.iter().fold(head, |acc, s| distribute(&acc, s))
}

/// Term-by-term product of two expressions.
fn distribute(a: &Expr, b: &Expr) -> Expr {
    let bt = b.terms();
    let mut out = Vec::with_capacity(a.terms().len() * bt.len());
    for t in a.terms() {
        for u in &bt {
            out.push(mul([t.clone(), u.clone()]));
        }
    }
    add(out)
}

fn exact_root(r: &BigRational, n: u32) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().nth_root(n);
    let den = r.denom().nth_root(n);
    let candidate = BigRational::new(num, den);
    (num_traits::Pow::pow(&candidate, n) == *r).then_some(candidate)
}

pub(super) fn pow(base: Expr, exp: BigRational) -> Expr {
    if exp.is_zero() {
        return Expr::one();
    }
    if exp.is_one() {
        return base;
    }
    let int_exp = if exp.is_integer() { exp.to_integer().to_i64() } else { None };
    let raw = |b: Expr, e: BigRational| Expr::from_node(Node::Pow(b, e));
    match base.node() {
        Node::Num(n) => {
            if let Some(k) = int_exp {
                return match n.powi(k) {
                    Some(v) => Expr::num(v),
                    None => raw(base.clone(), exp),
                };
            }
            match n {
                Number::Float(v) if *v >= 0.0 => {
                    Expr::float(v.powf(super::rational_to_f64(&exp)))
                }
                Number::Rational(r) => {
                    // exact roots of perfect powers, e.g. 4^(1/2) = 2
                    let den = exp.denom().to_u32();
                    let num = exp.numer().to_i64();
                    if let (Some(d), Some(k)) = (den, num) {
                        if let Some(root) = exact_root(r, d) {
                            if let Some(v) = Number::Rational(root).powi(k) {
                                return Expr::num(v);
                            }
                        }
                    }
                    raw(base.clone(), exp)
                }
                _ => raw(base.clone(), exp),
            }
        }
        Node::Add(ts) if ts.is_empty() => {
            if exp.is_positive() {
                Expr::zero()
            } else {
                raw(base.clone(), exp)
            }
        }
        Node::Pow(b, e) if int_exp.is_some() => pow(b.clone(), e * &exp),
        Node::Mul(c, fs) if int_exp.is_some() => {
            let k = int_exp.unwrap();
            let coeff = match c.powi(k) {
                Some(v) => v,
                None => return raw(base.clone(), exp),
            };
            mul(std::iter::once(Expr::num(coeff)).chain(fs.iter().map(|f| pow(f.clone(), exp.clone()))))
        }
        Node::Add(_) => match int_exp {
            Some(k) if k > 0 && k <= MAX_EXPAND_POWER => {
                let mut acc = base.clone();
                for _ in 1..k {
                    acc = distribute(&acc, &base);
                }
                acc
            }
            _ => raw(base.clone(), exp),
        },
        _ => raw(base.clone(), exp),
    }
}

pub(super) fn apply(func: Func, arg: Expr) -> Expr {
    if let Some(n) = arg.as_number() {
        match n {
            Number::Float(v) => {
                if let Ok(value) = super::eval::apply_f64(func, v) {
                    return Expr::float(value);
                }
            }
            Number::Rational(r) => {
                if r.is_zero() {
                    match func {
                        Func::Sin | Func::Tan | Func::Atan | Func::Sqrt => return Expr::zero(),
                        Func::Cos | Func::Exp => return Expr::one(),
                        Func::Log => {}
                    }
                } else if r.is_one() {
                    match func {
                        Func::Log => return Expr::zero(),
                        Func::Sqrt => return Expr::one(),
                        _ => {}
                    }
                }
            }
        }
    }
    Expr::from_node(Node::Apply(func, arg))
}
