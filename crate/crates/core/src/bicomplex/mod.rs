//! Finite-order local forms on the jet bundle in the `(dx^μ, θ^a_I)` basis,
//! with the horizontal and vertical differentials, contraction and the Lie
//! derivative.
//!
//! ```
//! use cahiers::bicomplex::LocalForm;
//! use cahiers::jet::JetContext;
//!
//! let ctx = JetContext::new(["x"], ["u"]).unwrap();
//! let f = LocalForm::parse(&ctx, "u^2").unwrap();
//! assert_eq!(f.d_v().to_string(), "2*u*th(u)");
//! assert_eq!(f.d_h().to_string(), "2*u*u_x*dx");
//! ```

mod parse;
mod verify;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::expr::{Expr, Node, ParseError, ZeroTest};
use crate::jet::{JetContext, JetError, JetVar, JetVectorField, Section};

pub use verify::{verify_identities, IdentityCheck, VerifyReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("forms live over different jet contexts")]
    ContextMismatch,
    #[error("expected bidegree ({p}, {q}), found ({found_p}, {found_q})")]
    Bidegree { p: usize, q: usize, found_p: usize, found_q: usize },
    #[error("`{0}` is not a scalar; only functions may be divided, raised to powers or passed to functions")]
    NotScalar(String),
    #[error("unknown contact form `{0}`")]
    UnknownContact(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A basic 1-form: `dx^μ` or the contact form `θ^a_I`.
///
/// The derived order puts every `dx` before every `θ`, `dx` by coordinate
/// position and `θ` by field then multi-index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Covector {
    Dx(usize),
    Theta(JetVar),
}

/// Sorted covectors of one term.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Basis {
    pub dx: Vec<usize>,
    pub theta: Vec<JetVar>,
}

impl Basis {
    pub fn bidegree(&self) -> (usize, usize) {
        (self.dx.len(), self.theta.len())
    }

    pub fn degree(&self) -> usize {
        self.dx.len() + self.theta.len()
    }

    pub fn covectors(&self) -> Vec<Covector> {
        self.dx.iter().map(|&mu| Covector::Dx(mu)).chain(self.theta.iter().cloned().map(Covector::Theta)).collect()
    }

    /// Sorts `covs` into a basis element. Returns the permutation sign, or
    /// `None` when a covector repeats.
    pub fn canonical(mut covs: Vec<Covector>) -> Option<(Basis, i64)> {
        let mut sign = 1;
        for i in 1..covs.len() {
            let mut j = i;
            while j > 0 && covs[j - 1] > covs[j] {
                covs.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if covs.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        let mut basis = Basis::default();
        for c in covs {
            match c {
                Covector::Dx(mu) => basis.dx.push(mu),
                Covector::Theta(v) => basis.theta.push(v),
            }
        }
        Some((basis, sign))
    }
}

/// A sum of terms `f · dx^{μ1} ∧ ⋯ ∧ θ^{a_q}_{I_q}` over a jet context.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalForm {
    ctx: Arc<JetContext>,
    terms: BTreeMap<Basis, Expr>,
}

impl LocalForm {
    pub fn zero(ctx: &JetContext) -> Self {
        LocalForm { ctx: Arc::new(ctx.clone()), terms: BTreeMap::new() }
    }

    fn empty_like(&self) -> Self {
        LocalForm { ctx: self.ctx.clone(), terms: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(ctx: &JetContext, f: Expr) -> Self {
        Self::term(ctx, f, Vec::new())
    }

    pub fn dx(ctx: &JetContext, mu: usize) -> Self {
        Self::term(ctx, Expr::one(), vec![Covector::Dx(mu)])
    }

    pub fn theta(ctx: &JetContext, v: JetVar) -> Self {
        Self::term(ctx, Expr::one(), vec![Covector::Theta(v)])
    }

    /// `f · c1 ∧ ⋯ ∧ ck` in any covector order.
    pub fn term(ctx: &JetContext, f: Expr, covs: Vec<Covector>) -> Self {
        let mut out = Self::zero(ctx);
        out.push(f, covs);
        out
    }

    fn push(&mut self, f: Expr, covs: Vec<Covector>) {
        if f.is_zero() {
            return;
        }
        if let Some((basis, sign)) = Basis::canonical(covs) {
            let f = if sign < 0 { f.neg() } else { f };
            self.accumulate(basis, f);
        }
    }

    fn accumulate(&mut self, basis: Basis, f: Expr) {
        let sum = match self.terms.remove(&basis) {
            Some(g) => g + f,
            None => f,
        };
        if !sum.is_zero() {
            self.terms.insert(basis, sum);
        }
    }

    pub fn context(&self) -> &JetContext {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Expr)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Structurally zero.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, basis: &Basis) -> Expr {
        self.terms.get(basis).cloned().unwrap_or_else(Expr::zero)
    }

    /// The scalar part, i.e. the coefficient of the empty basis element.
    pub fn scalar(&self) -> Expr {
        self.coefficient(&Basis::default())
    }

    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|b| b.degree() == 0)
    }

    pub fn bidegrees(&self) -> BTreeSet<(usize, usize)> {
        self.terms.keys().map(Basis::bidegree).collect()
    }

    /// The common bidegree of all terms; `None` for zero or mixed forms.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let b = self.bidegrees();
        if b.len() == 1 {
            b.into_iter().next()
        } else {
            None
        }
    }

    /// Fails unless every term has bidegree `(p, q)`.
    pub fn expect_bidegree(&self, p: usize, q: usize) -> Result<(), FormError> {
        match self.bidegrees().into_iter().find(|&b| b != (p, q)) {
            None => Ok(()),
            Some((found_p, found_q)) => Err(FormError::Bidegree { p, q, found_p, found_q }),
        }
    }

    /// The `(p, q)` component.
    pub fn component(&self, p: usize, q: usize) -> LocalForm {
        let mut out = self.empty_like();
        out.terms = self.terms.iter().filter(|(b, _)| b.bidegree() == (p, q)).map(|(b, f)| (b.clone(), f.clone())).collect();
        out
    }

    fn same_context(&self, other: &LocalForm) -> Result<(), FormError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(FormError::ContextMismatch)
        }
    }

    pub fn add(&self, other: &LocalForm) -> Result<LocalForm, FormError> {
        self.same_context(other)?;
        let mut out = self.clone();
        for (b, f) in &other.terms {
            out.accumulate(b.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LocalForm) -> Result<LocalForm, FormError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LocalForm {
        self.map_coefficients(|f| f.neg())
    }

    pub fn scale(&self, c: &Expr) -> LocalForm {
        self.map_coefficients(|f| f.clone() * c.clone())
    }

    /// Applies `g` to every coefficient, dropping terms that become zero.
    pub fn map_coefficients(&self, g: impl Fn(&Expr) -> Expr) -> LocalForm {
        let mut out = self.empty_like();
        for (b, f) in &self.terms {
            let v = g(f);
            if !v.is_zero() {
                out.terms.insert(b.clone(), v);
            }
        }
        out
    }

    pub fn wedge(&self, other: &LocalForm) -> Result<LocalForm, FormError> {
        self.same_context(other)?;
        let mut out = self.empty_like();
        for (b1, f1) in &self.terms {
            for (b2, f2) in &other.terms {
                let mut covs = b1.covectors();
                covs.extend(b2.covectors());
                out.push(f1.clone() * f2.clone(), covs);
            }
        }
        Ok(out)
    }

    /// `d_V`: `d_V f = Σ ∂f/∂u^a_I θ^a_I`, zero on `dx` and `θ`.
    pub fn d_v(&self) -> LocalForm {
        let mut out = self.empty_like();
        for (b, f) in &self.terms {
            for v in self.ctx.jet_vars(f) {
                let df = f.differentiate(&self.ctx.var_name(&v));
                let mut covs = vec![Covector::Theta(v)];
                covs.extend(b.covectors());
                out.push(df, covs);
            }
        }
        out
    }

    /// `d_H`: `d_H f = D_μ f dx^μ`, `d_H dx = 0`,
    /// `d_H θ^a_I = −θ^a_{I+μ} ∧ dx^μ`.
    pub fn d_h(&self) -> LocalForm {
        let mut out = self.empty_like();
        let dim = self.ctx.dim();
        for (b, f) in &self.terms {
            let covs = b.covectors();
            for mu in 0..dim {
                let mut c = vec![Covector::Dx(mu)];
                c.extend(covs.iter().cloned());
                out.push(self.ctx.total_derivative(f, mu), c);
            }
            for (j, cj) in covs.iter().enumerate() {
                let Covector::Theta(v) = cj else { continue };
                // (−1)^j from moving d_H past j covectors, times the rule's −1.
                let coeff = if j % 2 == 0 { f.neg() } else { f.clone() };
                for mu in 0..dim {
                    let mut c = covs[..j].to_vec();
                    c.push(Covector::Theta(v.plus(mu)));
                    c.push(Covector::Dx(mu));
                    c.extend(covs[j + 1..].iter().cloned());
                    out.push(coeff.clone(), c);
                }
            }
        }
        out
    }

    /// `d = d_H + d_V`.
    pub fn d(&self) -> LocalForm {
        self.d_h().add(&self.d_v()).expect("same context")
    }

    /// `ι_X` as a degree −1 derivation with `ι_X dx^μ = X^μ` and
    /// `ι_X θ^a_I = Y^a_I − u^a_{I+μ} X^μ`.
    pub fn contract(&self, x: &JetVectorField) -> Result<LocalForm, FormError> {
        let ctx = &self.ctx;
        if x.horizontal.len() != ctx.dim() {
            return Err(JetError::Arity { expected: ctx.dim(), found: x.horizontal.len() }.into());
        }
        let mut out = self.empty_like();
        for (b, f) in &self.terms {
            let covs = b.covectors();
            for (j, cj) in covs.iter().enumerate() {
                let value = match cj {
                    Covector::Dx(mu) => x.horizontal[*mu].clone(),
                    Covector::Theta(v) => {
                        if let Some(n) = x.order {
                            if v.order() > n {
                                return Err(JetError::OrderShortfall { needed: v.order(), available: n }.into());
                            }
                        }
                        let mut terms = vec![x.y(v)];
                        for (mu, xm) in x.horizontal.iter().enumerate() {
                            if !xm.is_zero() {
                                terms.push((xm.clone() * ctx.var_expr(&v.plus(mu))).neg());
                            }
                        }
                        Expr::add(terms)
                    }
                };
                let value = if j % 2 == 0 { value } else { value.neg() };
                let mut rest = covs[..j].to_vec();
                rest.extend(covs[j + 1..].iter().cloned());
                out.push(f.clone() * value, rest);
            }
        }
        Ok(out)
    }

    /// `L_X ω = ι_X dω + d ι_X ω`.
    pub fn lie(&self, x: &JetVectorField) -> Result<LocalForm, FormError> {
        let a = self.d().contract(x)?;
        let b = self.contract(x)?.d();
        a.add(&b)
    }

    /// Pullback along the prolonged section `j^∞φ`: coefficients are
    /// evaluated on the prolongation, `dx` is kept and `θ^a_I` becomes
    /// `Σ_ν (∂_ν ∂_I φ^a − ∂_{I+ν} φ^a) dx^ν`, which `zero` should find to
    /// vanish.
    pub fn pullback(&self, section: &Section, zero: &ZeroTest) -> Result<LocalForm, FormError> {
        let ctx = &self.ctx;
        let needed = self
            .terms
            .iter()
            .map(|(b, f)| {
                let t = b.theta.iter().map(|v| v.order() + 1).max().unwrap_or(0);
                t.max(ctx.order(f))
            })
            .max()
            .unwrap_or(0);
        let p = ctx.prolong(section, needed)?;
        let mut out = self.empty_like();
        for (b, f) in &self.terms {
            let mut acc = LocalForm::function(ctx, ctx.substitute(f, &p)?);
            for &mu in &b.dx {
                acc = acc.wedge(&LocalForm::dx(ctx, mu))?;
            }
            for v in &b.theta {
                let base = &p.values[v];
                let mut image = self.empty_like();
                for nu in 0..ctx.dim() {
                    let c = base.differentiate(&ctx.coords()[nu]) - p.values[&v.plus(nu)].clone();
                    if !zero.is_zero(&c) {
                        image.push(c, vec![Covector::Dx(nu)]);
                    }
                }
                acc = acc.wedge(&image)?;
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }

    /// Zero when every coefficient passes `zero`.
    pub fn is_zero(&self, zero: &ZeroTest) -> bool {
        self.terms.values().all(|f| zero.is_zero(f))
    }

    /// The first term whose coefficient is visibly nonzero.
    pub fn nonzero_term(&self, zero: &ZeroTest) -> Option<(Basis, Expr)> {
        self.terms.iter().find(|(_, f)| !zero.is_zero(f)).map(|(b, f)| (b.clone(), f.clone()))
    }

    pub fn equals(&self, other: &LocalForm, zero: &ZeroTest) -> Result<bool, FormError> {
        Ok(self.sub(other)?.is_zero(zero))
    }

    /// Parses the form DSL, e.g. `u_x*dx & th(u) + du_x`.
    pub fn parse(ctx: &JetContext, text: &str) -> Result<LocalForm, FormError> {
        parse::parse_form(ctx, text)
    }

    pub fn covector_name(&self, c: &Covector) -> String {
        covector_name(&self.ctx, c)
    }
}

pub fn covector_name(ctx: &JetContext, c: &Covector) -> String {
    match c {
        Covector::Dx(mu) => format!("d{}", ctx.coords()[*mu]),
        Covector::Theta(v) => {
            let field = &ctx.fields()[v.field];
            if v.index.is_empty() {
                format!("th({field})")
            } else {
                let letters: String = v.index.as_slice().iter().map(|&mu| ctx.coords()[mu].as_str()).collect();
                format!("th({field},{letters})")
            }
        }
    }
}

impl fmt::Display for LocalForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return out.write_str("0");
        }
        for (k, (b, f)) in self.terms.iter().enumerate() {
            let mut coeff = f.to_string();
            let mut negative = false;
            if matches!(f.node(), Node::Add(_)) {
                coeff = format!("({coeff})");
            } else if let Some(rest) = coeff.strip_prefix('-') {
                negative = true;
                coeff = rest.to_string();
            }
            match (k, negative) {
                (0, true) => out.write_str("-")?,
                (0, false) => {}
                (_, true) => out.write_str(" - ")?,
                (_, false) => out.write_str(" + ")?,
            }
            let covs: Vec<String> = b.covectors().iter().map(|c| covector_name(&self.ctx, c)).collect();
            if covs.is_empty() {
                out.write_str(&coeff)?;
            } else if coeff == "1" {
                out.write_str(&covs.join(" & "))?;
            } else {
                write!(out, "{coeff}*{}", covs.join(" & "))?;
            }
        }
        Ok(())
    }
}
