use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::linalg::{rank, rref};
use super::monomial::{monomials_of_degree, monomials_up_to, Monomial, Poly};
use super::WeilError;
use crate::expr::json::rational;

/// Sparse vector over the basis of a Weil algebra.
pub(crate) type SparseVec = Vec<(usize, BigRational)>;

/// Finite presentation `ℝ[ε1..εm] / ((ε)^(l+1) + relations)`.
///
/// The quotient is computed once at construction by exact row reduction
/// inside the truncated polynomial ring; afterwards the algebra is an
/// immutable multiplication table on its monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct WeilAlgebra {
    m: usize,
    l: u32,
    relations: Vec<Poly>,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    /// Normal forms of the reducible monomials of degree <= l.
    rewrite: BTreeMap<Monomial, SparseVec>,
    table: Vec<Vec<SparseVec>>,
}

impl WeilAlgebra {
    /// The infinitesimal disk `D^m(l)`: all monomials of degree <= l survive.
    pub fn disk(m: usize, l: u32) -> Result<Arc<WeilAlgebra>, WeilError> {
        if m == 0 {
            return Err(WeilError::NoGenerators);
        }
        Ok(Arc::new(Self::build(m, l, Vec::new())))
    }

    /// The dual numbers `ℝ[ε]/ε²`.
    pub fn dual_numbers() -> Arc<WeilAlgebra> {
        Arc::new(Self::build(1, 1, Vec::new()))
    }

    /// `ℝ` itself, the algebra of an unthickened point.
    pub fn trivial() -> Arc<WeilAlgebra> {
        Arc::new(Self::build(0, 0, Vec::new()))
    }

    /// Quotient of `disk` by additional relations (each with zero constant term).
    pub fn quotient(disk: &WeilAlgebra, relations: Vec<Poly>) -> Result<Arc<WeilAlgebra>, WeilError> {
        let mut all = disk.relations.clone();
        for r in relations {
            if r.m != disk.m {
                return Err(WeilError::Arity { expected: disk.m, found: r.m });
            }
            if !r.constant_term().is_zero() {
                return Err(WeilError::ConstantTerm(r.to_string()));
            }
            if !r.is_zero() {
                all.push(r);
            }
        }
        Ok(Arc::new(Self::build(disk.m, disk.l, all)))
    }

    fn build(m: usize, l: u32, relations: Vec<Poly>) -> WeilAlgebra {
        let monos = monomials_up_to(m, l);
        let n = monos.len();
        // columns run from the largest monomial down, so pivots land on
        // high-degree monomials and the basis keeps the small ones
        let col_of = |mono: &Monomial| n - 1 - monos.binary_search(mono).expect("monomial in range");
        let mut rows = Vec::new();
        for r in &relations {
            for mu in &monos {
                let prod = r.mul_truncated(&Poly::monomial(mu.clone()), l);
                if prod.is_zero() {
                    continue;
                }
                let mut row = vec![BigRational::zero(); n];
                for (mono, c) in &prod.terms {
                    row[col_of(mono)] = c.clone();
                }
                rows.push(row);
            }
        }
        let red = rref(rows, n);
        let mono_at = |col: usize| monos[n - 1 - col].clone();

        let basis: Vec<Monomial> = monos.iter().filter(|mono| !red.is_pivot(col_of(mono))).cloned().collect();
        let index: BTreeMap<Monomial, usize> = basis.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        let mut rewrite = BTreeMap::new();
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            let mut image = Vec::new();
            for (col, c) in row.iter().enumerate() {
                if col != p && !c.is_zero() {
                    image.push((index[&mono_at(col)], -c.clone()));
                }
            }
            image.sort_by_key(|(i, _)| *i);
            rewrite.insert(mono_at(p), image);
        }

        let mut alg = WeilAlgebra { m, l, relations, basis, index, rewrite, table: Vec::new() };
        let dim = alg.basis.len();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        #[allow(clippy::needless_range_loop)]
        for i in 0..dim {
            for j in i..dim {
                let prod = alg.basis[i].mul(&alg.basis[j]);
                let v = alg.reduce_monomial(&prod);
                table[i][j] = v.clone();
                table[j][i] = v;
            }
        }
        alg.table = table;
        alg
    }

    pub fn generators(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.l
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn relations(&self) -> &[Poly] {
        &self.relations
    }

    pub fn is_disk(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn basis_index(&self, mono: &Monomial) -> Option<usize> {
        self.index.get(mono).copied()
    }

    /// Generators of the defining ideal: the degree-(l+1) monomials followed
    /// by the extra relations.
    pub fn ideal_generators(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = monomials_of_degree(self.m, self.l + 1).into_iter().map(Poly::monomial).collect();
        out.extend(self.relations.iter().cloned());
        out
    }

    /// Normal form of a single monomial as a sparse basis vector.
    pub fn reduce_monomial(&self, mono: &Monomial) -> SparseVec {
        if mono.degree() > self.l {
            return Vec::new();
        }
        if let Some(&i) = self.index.get(mono) {
            return vec![(i, BigRational::one())];
        }
        self.rewrite.get(mono).cloned().unwrap_or_default()
    }

    /// Normal form of a polynomial as a dense coefficient vector.
    pub fn reduce(&self, p: &Poly) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.dim()];
        for (mono, c) in &p.terms {
            for (i, r) in self.reduce_monomial(mono) {
                out[i] += c * r;
            }
        }
        out
    }

    pub(crate) fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    /// Embedding dimension `dim(V/V²)`, where `V` is the maximal ideal.
    pub fn width(&self) -> usize {
        let dim = self.dim();
        if dim <= 1 {
            return 0;
        }
        let mut rows = Vec::new();
        for i in 1..dim {
            for j in i..dim {
                let mut row = vec![BigRational::zero(); dim];
                for (k, c) in &self.table[i][j] {
                    row[*k] += c;
                }
                rows.push(row);
            }
        }
        (dim - 1) - rank(rows, dim)
    }

    /// Parses `D(m,l)` with optional `;rel=<poly>,<poly>,...`.
    pub fn parse_spec(text: &str) -> Result<Arc<WeilAlgebra>, WeilError> {
        let bad = || WeilError::Spec(text.to_string());
        let (head, rels) = match text.split_once(';') {
            Some((h, r)) => (h.trim(), Some(r.trim())),
            None => (text.trim(), None),
        };
        let inner = head
            .strip_prefix('D')
            .and_then(|s| s.trim().strip_prefix('('))
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (m, l) = inner.split_once(',').ok_or_else(bad)?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let l: u32 = l.trim().parse().map_err(|_| bad())?;
        let disk = WeilAlgebra::disk(m, l)?;
        let Some(rels) = rels else { return Ok(disk) };
        let rels = rels.strip_prefix("rel").map(str::trim_start).and_then(|s| s.strip_prefix('=')).ok_or_else(bad)?;
        let mut polys = Vec::new();
        for piece in split_top_level(rels) {
            let e = crate::expr::parse(piece)?;
            polys.push(Poly::from_expr(&e, m).map_err(WeilError::NotPolynomial)?);
        }
        WeilAlgebra::quotient(&disk, polys)
    }

    pub fn spec_string(&self) -> String {
        let mut s = format!("D({},{})", self.m, self.l);
        if !self.relations.is_empty() {
            s.push_str(";rel=");
            let rels: Vec<String> = self.relations.iter().map(|r| r.to_string()).collect();
            s.push_str(&rels.join(","));
        }
        s
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

impl fmt::Display for WeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: Vec<u32>,
    #[serde(with = "rational")]
    coeff: BigRational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraRepr {
    m: usize,
    l: u32,
    relations: Vec<Vec<TermRepr>>,
    #[serde(default)]
    basis: Option<Vec<Vec<u32>>>,
}

impl Serialize for WeilAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AlgebraRepr {
            m: self.m,
            l: self.l,
            relations: self
                .relations
                .iter()
                .map(|r| r.terms.iter().map(|(mono, c)| TermRepr { exponents: mono.0.clone(), coeff: c.clone() }).collect())
                .collect(),
            basis: Some(self.basis.iter().map(|b| b.0.clone()).collect()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeilAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<WeilAlgebra, D::Error> {
        use serde::de::Error;
        let repr = AlgebraRepr::deserialize(d)?;
        let mut polys = Vec::new();
        for terms in repr.relations {
            let mut p = Poly::zero(repr.m);
            for t in terms {
                if t.exponents.len() != repr.m {
                    return Err(D::Error::custom(format!("exponent vector of length {} for m = {}", t.exponents.len(), repr.m)));
                }
                p.add_term(Monomial(t.exponents), t.coeff);
            }
            polys.push(p);
        }
        let alg = if repr.m == 0 {
            WeilAlgebra::trivial()
        } else {
            let disk = WeilAlgebra::disk(repr.m, repr.l).map_err(D::Error::custom)?;
            WeilAlgebra::quotient(&disk, polys).map_err(D::Error::custom)?
        };
        if let Some(basis) = repr.basis {
            let ours: Vec<Vec<u32>> = alg.basis.iter().map(|b| b.0.clone()).collect();
            if basis != ours {
                return Err(D::Error::custom("basis does not match the presentation"));
            }
        }
        Ok(Arc::unwrap_or_clone(alg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn basis_strings(a: &WeilAlgebra) -> Vec<String> {
        a.basis().iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn dual_numbers() {
        let d = WeilAlgebra::disk(1, 1).unwrap();
        assert_eq!(basis_strings(&d), ["1", "e1"]);
        assert!(d.reduce_monomial(&Monomial(vec![2])).is_empty());
    }

    #[test]
    fn two_dimensional_first_order_disk() {
        let d = WeilAlgebra::disk(2, 1).unwrap();
        assert_eq!(basis_strings(&d), ["1", "e1", "e2"]);
        assert!(d.reduce_monomial(&Monomial(vec![1, 1])).is_empty());
    }

    #[test]
    fn third_order_line() {
        assert_eq!(basis_strings(&WeilAlgebra::disk(1, 3).unwrap()), ["1", "e1", "e1^2", "e1^3"]);
    }

    #[test]
    fn zero_generators_rejected() {
        assert_eq!(WeilAlgebra::disk(0, 2).unwrap_err(), WeilError::NoGenerators);
    }

    #[test]
    fn quotient_by_mixed_monomial() {
        let q = WeilAlgebra::parse_spec("D(2,2);rel=e1*e2").unwrap();
        assert_eq!(basis_strings(&q), ["1", "e1", "e2", "e1^2", "e2^2"]);
        assert_eq!(q.dim(), 5);
    }

    #[test]
    fn quotient_collapsing_to_dual_numbers() {
        let q = WeilAlgebra::parse_spec("D(1,2);rel=e1^2").unwrap();
        assert_eq!(basis_strings(&q), ["1", "e1"]);
    }

    #[test]
    fn constant_term_rejected() {
        assert!(matches!(WeilAlgebra::parse_spec("D(1,2);rel=1 + e1"), Err(WeilError::ConstantTerm(_))));
    }

    #[test]
    fn non_monomial_relation_rewrites() {
        // e2^2 = e1^2 leaves e1^2 in the basis and rewrites e2^2
        let q = WeilAlgebra::parse_spec("D(2,2);rel=e2^2 - e1^2").unwrap();
        assert_eq!(q.dim(), 5);
        let v = q.reduce(&Poly::from_expr(&parse("e2^2").unwrap(), 2).unwrap());
        let i = q.basis_index(&Monomial(vec![2, 0])).unwrap();
        assert_eq!(v[i], BigRational::one());
    }

    #[test]
    fn widths() {
        for m in 1..=3 {
            for l in 1..=3 {
                assert_eq!(WeilAlgebra::disk(m, l).unwrap().width(), m);
            }
        }
        assert_eq!(WeilAlgebra::dual_numbers().width(), 1);
        assert_eq!(WeilAlgebra::parse_spec("D(2,2);rel=e1*e2").unwrap().width(), 2);
        assert_eq!(WeilAlgebra::parse_spec("D(2,2);rel=e2 - e1^2").unwrap().width(), 1);
    }

    #[test]
    fn json_round_trip_keeps_basis_order() {
        let q = WeilAlgebra::parse_spec("D(2,3);rel=e1*e2 - e2^3").unwrap();
        let text = serde_json::to_string(&*q).unwrap();
        let back: WeilAlgebra = crate::json::from_json_str(&text).unwrap();
        assert_eq!(back, *q);
        assert_eq!(back.basis(), q.basis());
    }
}
