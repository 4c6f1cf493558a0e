use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;

use super::algebra::WeilAlgebra;
use super::linalg::{rref, Rref};
use super::monomial::{generator_name, Monomial, Poly};

/// Kähler 1-forms `Ω¹(W)`: the free `W`-module on `dε1..dεm` modulo `d` of
/// the defining ideal.
#[derive(Clone, Debug)]
pub struct KaehlerModule {
    algebra: Arc<WeilAlgebra>,
    free: Vec<(Monomial, usize)>,
    reduced: Rref,
    basis: Vec<(Monomial, usize)>,
}

/// A 1-form as coordinates over [`KaehlerModule::free_basis`].
#[derive(Clone, Debug, PartialEq)]
pub struct KaehlerForm {
    pub coeffs: Vec<BigRational>,
}

impl KaehlerModule {
    pub fn new(algebra: &Arc<WeilAlgebra>) -> KaehlerModule {
        let m = algebra.generators();
        let dim = algebra.dim();
        let free: Vec<(Monomial, usize)> = algebra
            .basis()
            .iter()
            .flat_map(|mu| (0..m).map(move |i| (mu.clone(), i)))
            .collect();
        let n = free.len();
        // highest monomials first so that pivots eliminate them
        let col = |b: usize, i: usize| n - 1 - (b * m + i);

        let mut rows = Vec::new();
        for r in algebra.ideal_generators() {
            let partials: Vec<Vec<BigRational>> = (0..m).map(|i| algebra.reduce(&r.derivative(i))).collect();
            for nu in algebra.basis() {
                let nu_poly = Poly::monomial(nu.clone());
                let mut row = vec![BigRational::zero(); n];
                let mut any = false;
                for (i, dr) in partials.iter().enumerate() {
                    for (b, c) in dr.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let prod = Poly::monomial(algebra.basis()[b].clone()).mul_truncated(&nu_poly, algebra.order() + 1);
                        for (k, v) in algebra.reduce(&prod).into_iter().enumerate() {
                            if !v.is_zero() {
                                row[col(k, i)] += c * v;
                                any = true;
                            }
                        }
                    }
                }
                if any {
                    rows.push(row);
                }
            }
        }
        let reduced = rref(rows, n);
        let basis = (0..dim * m)
            .filter(|&j| !reduced.is_pivot(col(j / m, j % m)))
            .map(|j| free[j].clone())
            .collect();
        KaehlerModule { algebra: algebra.clone(), free, reduced, basis }
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Surviving generators `μ·dε_i` after the quotient.
    pub fn basis(&self) -> &[(Monomial, usize)] {
        &self.basis
    }

    /// All `μ·dε_i` before the quotient, `μ` running over the algebra basis.
    pub fn free_basis(&self) -> &[(Monomial, usize)] {
        &self.free
    }

    pub(crate) fn free_index(&self, mu: &Monomial, i: usize) -> Option<usize> {
        let b = self.algebra.basis_index(mu)?;
        Some(b * self.algebra.generators() + i)
    }

    /// The form `μ·dε_i`.
    pub fn form(&self, mu: &Monomial, i: usize) -> Option<KaehlerForm> {
        let j = self.free_index(mu, i)?;
        let mut coeffs = vec![BigRational::zero(); self.free.len()];
        coeffs[j] = BigRational::from_integer(1.into());
        Some(KaehlerForm { coeffs })
    }

    /// Normal form: the relation span is projected out.
    pub fn reduce(&self, form: &KaehlerForm) -> KaehlerForm {
        let n = self.free.len();
        let mut v: Vec<BigRational> = (0..n).map(|c| form.coeffs[n - 1 - c].clone()).collect();
        self.reduced.reduce(&mut v);
        KaehlerForm { coeffs: (0..n).map(|j| v[n - 1 - j].clone()).collect() }
    }

    pub fn is_zero(&self, form: &KaehlerForm) -> bool {
        self.reduce(form).coeffs.iter().all(Zero::is_zero)
    }

    pub fn display(&self, form: &KaehlerForm) -> String {
        let terms: Vec<String> = self
            .free
            .iter()
            .zip(&form.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|((mu, i), c)| {
                let d = format!("d{}", generator_name(*i));
                let body = if mu.is_one() { d } else { format!("{mu}*{d}") };
                if *c == BigRational::from_integer(1.into()) {
                    body
                } else {
                    format!("{c}*{body}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl fmt::Display for KaehlerModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self.basis.iter().map(|(mu, i)| {
            let d = format!("d{}", generator_name(*i));
            if mu.is_one() { d } else { format!("{mu}*{d}") }
        }).collect();
        write!(f, "Ω¹({}) = span{{{}}}", self.algebra, shown.join(", "))
    }
}
