use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::index::{JetVar, MultiIndex};
use super::JetError;
use crate::expr::{Binding, Expr, ZeroTest};

/// Base coordinates and field components of a jet bundle over a chart.
///
/// Coordinates are single letters so that jet variables read as
/// `<field>_<letters>`, e.g. `u_tx` for `∂_t ∂_x u`. Letters are kept in the
/// declaration order of the coordinates, so `u_xt` and `u_tx` name the same
/// variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ContextRepr", into = "ContextRepr")]
pub struct JetContext {
    coords: Vec<String>,
    fields: Vec<String>,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextRepr {
    coords: Vec<String>,
    fields: Vec<String>,
}

impl TryFrom<ContextRepr> for JetContext {
    type Error = JetError;
    fn try_from(r: ContextRepr) -> Result<Self, JetError> {
        JetContext::new(r.coords, r.fields)
    }
}

impl From<JetContext> for ContextRepr {
    fn from(c: JetContext) -> Self {
        ContextRepr { coords: c.coords, fields: c.fields }
    }
}

impl JetContext {
    pub fn new<S: Into<String>, T: Into<String>>(
        coords: impl IntoIterator<Item = S>,
        fields: impl IntoIterator<Item = T>,
    ) -> Result<JetContext, JetError> {
        let coords: Vec<String> = coords.into_iter().map(Into::into).collect();
        let fields: Vec<String> = fields.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for c in &coords {
            let mut chars = c.chars();
            if !matches!((chars.next(), chars.next()), (Some(ch), None) if ch.is_alphabetic()) {
                return Err(JetError::InvalidCoordinate(c.clone()));
            }
            if !seen.insert(c.clone()) {
                return Err(JetError::Duplicate(c.clone()));
            }
        }
        for a in &fields {
            let ok = a.chars().next().is_some_and(char::is_alphabetic) && a.chars().all(char::is_alphanumeric);
            if !ok || crate::expr::Func::from_name(a).is_some() {
                return Err(JetError::InvalidField(a.clone()));
            }
            if !seen.insert(a.clone()) {
                return Err(JetError::Duplicate(a.clone()));
            }
        }
        Ok(JetContext { coords, fields })
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn fields(&self) -> &[String] {
        &self.fields
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|c| c == name)
    }

    pub fn var_name(&self, v: &JetVar) -> String {
        let mut s = self.fields[v.field].clone();
        if !v.index.is_empty() {
            s.push('_');
            for &mu in v.index.as_slice() {
                s.push_str(&self.coords[mu]);
            }
        }
        s
    }

    pub fn var_expr(&self, v: &JetVar) -> Expr {
        Expr::var(self.var_name(v))
    }

    /// Reads `u`, `u_x`, `u_xt`, ... as a jet variable.
    pub fn parse_var(&self, name: &str) -> Option<JetVar> {
        let (field, letters) = match name.split_once('_') {
            Some((f, l)) if !l.is_empty() => (f, l),
            Some(_) => return None,
            None => (name, ""),
        };
        let a = self.field_index(field)?;
        let mut idx = Vec::with_capacity(letters.len());
        for ch in letters.chars() {
            idx.push(self.coords.iter().position(|c| c.starts_with(ch))?);
        }
        Some(JetVar::new(a, MultiIndex::new(idx)))
    }

    /// Rewrites jet variables to canonical letter order (`u_xt → u_tx`).
    pub fn normalize(&self, e: &Expr) -> Expr {
        e.rename(&|name| {
            let v = self.parse_var(name)?;
            let canonical = self.var_name(&v);
            (canonical != name).then_some(canonical)
        })
    }

    /// Errors on variables that are neither coordinates nor jet variables.
    pub fn check(&self, e: &Expr) -> Result<(), JetError> {
        self.check_with(e, &[])
    }

    /// As [`JetContext::check`], also admitting the listed parameters.
    pub fn check_with(&self, e: &Expr, params: &[String]) -> Result<(), JetError> {
        for v in e.free_vars() {
            if self.coord_index(&v).is_none() && self.parse_var(&v).is_none() && !params.contains(&v) {
                return Err(JetError::UnknownVariable(v));
            }
        }
        Ok(())
    }

    /// Parses DSL text as a function on the jet bundle.
    pub fn parse(&self, text: &str) -> Result<Expr, JetError> {
        let e = self.normalize(&crate::expr::parse(text)?);
        self.check(&e)?;
        Ok(e)
    }

    /// Jet variables occurring in `e`.
    pub fn jet_vars(&self, e: &Expr) -> BTreeSet<JetVar> {
        e.free_vars().iter().filter_map(|v| self.parse_var(v)).collect()
    }

    /// Highest `|I|` among the jet variables of `e` (0 if none).
    pub fn order(&self, e: &Expr) -> usize {
        self.jet_vars(e).iter().map(JetVar::order).max().unwrap_or(0)
    }

    /// `D_μ f = ∂_μ f + Σ u^a_{I+μ} ∂f/∂u^a_I`.
    pub fn total_derivative(&self, f: &Expr, mu: usize) -> Expr {
        let mut terms = vec![f.differentiate(&self.coords[mu])];
        for v in self.jet_vars(f) {
            let df = f.differentiate(&self.var_name(&v));
            if !df.is_zero() {
                terms.push(df * self.var_expr(&v.plus(mu)));
            }
        }
        Expr::add(terms)
    }

    /// `D_I f`, applied one coordinate at a time.
    pub fn total_derivative_multi(&self, f: &Expr, index: &MultiIndex) -> Expr {
        index.as_slice().iter().fold(f.clone(), |acc, &mu| self.total_derivative(&acc, mu))
    }

    /// Jet prolongation `u^a_I ↦ ∂_I φ^a` for `|I| <= n`.
    pub fn prolong(&self, section: &Section, n: usize) -> Result<Prolongation, JetError> {
        if section.components.len() != self.fields.len() {
            return Err(JetError::Arity { expected: self.fields.len(), found: section.components.len() });
        }
        let mut values: BTreeMap<JetVar, Expr> = BTreeMap::new();
        for (a, phi) in section.components.iter().enumerate() {
            for index in MultiIndex::all_up_to(self.dim(), n) {
                let value = match index.as_slice().last() {
                    None => phi.clone(),
                    Some(&mu) => {
                        let parent = JetVar::new(a, index.minus(mu).expect("last entry occurs"));
                        values[&parent].differentiate(&self.coords[mu])
                    }
                };
                values.insert(JetVar::new(a, index), value);
            }
        }
        Ok(Prolongation { order: n, values })
    }

    /// Substitutes a prolonged section into a jet expression.
    pub fn substitute(&self, f: &Expr, prolongation: &Prolongation) -> Result<Expr, JetError> {
        let need = self.order(f);
        if need > prolongation.order {
            return Err(JetError::OrderShortfall { needed: need, available: prolongation.order });
        }
        Ok(f.subs_with(&|name| self.parse_var(name).and_then(|v| prolongation.values.get(&v).cloned())))
    }

    /// Checks `∂_μ(f ∘ j φ) = (D_μ f) ∘ j φ` with the probabilistic zero test.
    pub fn chain_rule_identity(&self, f: &Expr, section: &Section, mu: usize, zero: &ZeroTest) -> Result<(), JetError> {
        let p = self.prolong(section, self.order(f) + 1)?;
        let lhs = self.substitute(f, &p)?.differentiate(&self.coords[mu]);
        let rhs = self.substitute(&self.total_derivative(f, mu), &p)?;
        let diff = lhs - rhs;
        if zero.is_zero(&diff) {
            return Ok(());
        }
        let (binding, value) = zero.witness(&diff).unwrap_or((Binding::new(), f64::NAN));
        Err(JetError::ChainRule { residue: diff.to_string(), binding, value })
    }

    pub fn display_table(&self, p: &Prolongation) -> String {
        p.values.iter().map(|(v, e)| format!("{} = {}\n", self.var_name(v), e)).collect()
    }
}

impl fmt::Display for JetContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({}; {})", self.coords.join(","), self.fields.join(","))
    }
}

/// A local section `x ↦ φ(x)`, one expression per field component. The
/// expressions may carry extra parameters besides the coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub components: Vec<Expr>,
}

impl Section {
    pub fn new(components: Vec<Expr>) -> Self {
        Section { components }
    }

    /// Parses `u=sin(x-t);v=x` style assignments (`;` or `,` separated at top level).
    pub fn parse(ctx: &JetContext, text: &str) -> Result<Section, JetError> {
        let mut found: BTreeMap<usize, Expr> = BTreeMap::new();
        for piece in split_assignments(text) {
            let (name, body) = piece.split_once('=').ok_or_else(|| JetError::Section(piece.to_string()))?;
            let a = ctx.field_index(name.trim()).ok_or_else(|| JetError::Section(piece.to_string()))?;
            let value = crate::expr::parse(body)?;
            if let Some(v) = value.free_vars().into_iter().find(|v| ctx.parse_var(v).is_some()) {
                return Err(JetError::Section(format!("{}: a section cannot depend on the jet variable `{v}`", piece.trim())));
            }
            if found.insert(a, value).is_some() {
                return Err(JetError::Section(format!("{}: component assigned twice", piece.trim())));
            }
        }
        let mut components = Vec::new();
        for (a, name) in ctx.fields().iter().enumerate() {
            components.push(found.remove(&a).ok_or_else(|| JetError::Section(format!("missing component `{name}`")))?);
        }
        Ok(Section { components })
    }

    pub fn eval_at(&self, binding: &Binding) -> Result<Vec<f64>, crate::expr::EvalError> {
        self.components.iter().map(|c| c.eval(binding)).collect()
    }
}

/// Splits on `;` and on `,` outside parentheses.
pub(crate) fn split_assignments(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' | ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.into_iter().filter(|s| !s.is_empty()).collect()
}

/// Values of the jet variables along a prolonged section.
#[derive(Clone, Debug, PartialEq)]
pub struct Prolongation {
    pub order: usize,
    pub values: BTreeMap<JetVar, Expr>,
}

impl Prolongation {
    pub fn get(&self, v: &JetVar) -> Option<&Expr> {
        self.values.get(v)
    }
}
