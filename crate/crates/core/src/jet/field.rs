use std::collections::BTreeMap;

use super::context::{JetContext, Section};
use super::index::{JetVar, MultiIndex};
use super::JetError;
use crate::expr::Expr;

/// `X^μ ∂/∂x^μ + Σ Y^a_I ∂/∂u^a_I` with finitely many nonzero `Y^a_I`.
///
/// `order` is the highest `|I|` for which the `Y^a_I` are known; `None`
/// means every missing component is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct JetVectorField {
    pub horizontal: Vec<Expr>,
    pub vertical: BTreeMap<JetVar, Expr>,
    pub order: Option<usize>,
}

impl JetVectorField {
    pub fn zero(ctx: &JetContext) -> Self {
        JetVectorField { horizontal: vec![Expr::zero(); ctx.dim()], vertical: BTreeMap::new(), order: None }
    }

    /// The coordinate field `∂/∂x^μ`.
    pub fn coordinate(ctx: &JetContext, mu: usize) -> Self {
        let mut x = Self::zero(ctx);
        x.horizontal[mu] = Expr::one();
        x
    }

    /// Highest `|I|` with a nonzero `Y^a_I` (0 if none).
    pub fn max_order(&self) -> usize {
        self.vertical.iter().filter(|(_, y)| !y.is_zero()).map(|(v, _)| v.order()).max().unwrap_or(0)
    }

    pub fn y(&self, v: &JetVar) -> Expr {
        self.vertical.get(v).cloned().unwrap_or_else(Expr::zero)
    }

    pub fn is_vertical(&self) -> bool {
        self.horizontal.iter().all(Expr::is_zero)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &JetVectorField) -> JetVectorField {
        let horizontal = self.horizontal.iter().zip(&other.horizontal).map(|(a, b)| a.clone() + b.clone()).collect();
        let mut vertical = self.vertical.clone();
        for (v, y) in &other.vertical {
            let sum = vertical.get(v).cloned().unwrap_or_else(Expr::zero) + y.clone();
            vertical.insert(v.clone(), sum);
        }
        vertical.retain(|_, y| !y.is_zero());
        let order = match (self.order, other.order) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        JetVectorField { horizontal, vertical, order }
    }

    /// `X_H + X_V` split at working order `n`: `X_H` lifts `X^μ` by the
    /// total derivative, `Y_H^a_I = X^μ u^a_{I+μ}`, and `X_V = X − X_H`.
    pub fn split(&self, ctx: &JetContext, n: usize) -> (JetVectorField, JetVectorField) {
        let mut h = BTreeMap::new();
        let mut v = BTreeMap::new();
        let mut keys: Vec<JetVar> = (0..ctx.fields().len())
            .flat_map(|a| MultiIndex::all_up_to(ctx.dim(), n).into_iter().map(move |i| JetVar::new(a, i)))
            .collect();
        keys.extend(self.vertical.keys().filter(|k| k.order() > n).cloned());
        for key in keys {
            let yh = Expr::add(
                self.horizontal
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(mu, x)| x.clone() * ctx.var_expr(&key.plus(mu))),
            );
            let yv = self.y(&key) - yh.clone();
            if !yh.is_zero() {
                h.insert(key.clone(), yh);
            }
            if !yv.is_zero() {
                v.insert(key, yv);
            }
        }
        let order = Some(self.order.map_or(n, |k| k.min(n)));
        let horizontal = JetVectorField { horizontal: self.horizontal.clone(), vertical: h, order };
        let vertical = JetVectorField { horizontal: vec![Expr::zero(); ctx.dim()], vertical: v, order };
        (horizontal, vertical)
    }

    /// `X f = X^μ ∂_μ f + Σ Y^a_I ∂f/∂u^a_I`.
    pub fn apply(&self, ctx: &JetContext, f: &Expr) -> Expr {
        let mut terms: Vec<Expr> = self
            .horizontal
            .iter()
            .zip(ctx.coords())
            .map(|(x, c)| x.clone() * f.differentiate(c))
            .collect();
        for v in ctx.jet_vars(f) {
            terms.push(self.y(&v) * f.differentiate(&ctx.var_name(&v)));
        }
        Expr::add(terms)
    }

    pub fn display(&self, ctx: &JetContext) -> String {
        let mut parts = Vec::new();
        for (x, c) in self.horizontal.iter().zip(ctx.coords()) {
            if !x.is_zero() {
                parts.push(format!("({x})*d/d{c}"));
            }
        }
        for (v, y) in &self.vertical {
            if !y.is_zero() {
                parts.push(format!("({y})*d/d{}", ctx.var_name(v)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Prolonged evolutionary field: `X^μ = 0`, `Y^a_I = D_I Q^a` for `|I| <= n`.
pub fn prolong_evolutionary(ctx: &JetContext, q: &[Expr], n: usize) -> Result<JetVectorField, JetError> {
    if q.len() != ctx.fields().len() {
        return Err(JetError::Arity { expected: ctx.fields().len(), found: q.len() });
    }
    let mut vertical = BTreeMap::new();
    for (a, qa) in q.iter().enumerate() {
        let mut cache: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
        for index in MultiIndex::all_up_to(ctx.dim(), n) {
            let value = match index.as_slice().last() {
                None => qa.clone(),
                Some(&mu) => ctx.total_derivative(&cache[&index.minus(mu).expect("last entry occurs")], mu),
            };
            cache.insert(index.clone(), value.clone());
            if !value.is_zero() {
                vertical.insert(JetVar::new(a, index), value);
            }
        }
    }
    Ok(JetVectorField { horizontal: vec![Expr::zero(); ctx.dim()], vertical, order: Some(n) })
}

/// Pushforward of a tangent vector along the prolonged section `j φ`, with
/// vertical perturbation `Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetTangent {
    pub horizontal: Vec<Expr>,
    pub vertical: BTreeMap<JetVar, Expr>,
}

/// Components at `j_p φ`: `x`-components `X^μ`, and
/// `u^a_I`-components `X^μ ∂_{I+μ} φ^a(p) + ∂_I Z^a(p)`, for `|I| <= n`.
pub fn ev_pushforward(
    ctx: &JetContext,
    phi: &Section,
    z: &Section,
    point: &[Expr],
    x: &[Expr],
    n: usize,
) -> Result<JetTangent, JetError> {
    let d = ctx.dim();
    if point.len() != d || x.len() != d {
        return Err(JetError::Arity { expected: d, found: point.len().min(x.len()) });
    }
    let pp = ctx.prolong(phi, n + 1)?;
    let pz = ctx.prolong(z, n)?;
    let at: BTreeMap<String, Expr> = ctx.coords().iter().cloned().zip(point.iter().cloned()).collect();
    let mut vertical = BTreeMap::new();
    for a in 0..ctx.fields().len() {
        for index in MultiIndex::all_up_to(d, n) {
            let key = JetVar::new(a, index);
            let mut terms = vec![pz.values[&key].subs(&at)];
            for (mu, xm) in x.iter().enumerate() {
                terms.push(xm.clone() * pp.values[&key.plus(mu)].subs(&at));
            }
            vertical.insert(key, Expr::add(terms));
        }
    }
    Ok(JetTangent { horizontal: x.to_vec(), vertical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn line() -> JetContext {
        JetContext::new(["x"], ["u"]).unwrap()
    }

    #[test]
    fn split_of_coordinate_field() {
        let c = line();
        let x = JetVectorField::coordinate(&c, 0);
        let (h, v) = x.split(&c, 1);
        assert_eq!(h.y(&c.parse_var("u").unwrap()), parse("u_x").unwrap());
        assert_eq!(h.y(&c.parse_var("u_x").unwrap()), parse("u_xx").unwrap());
        assert_eq!(v.y(&c.parse_var("u").unwrap()), parse("-u_x").unwrap());
        let sum = h.add(&v);
        assert_eq!((sum.horizontal, sum.vertical), (x.horizontal, x.vertical));
    }

    #[test]
    fn split_of_vertical_field() {
        let c = line();
        let q = prolong_evolutionary(&c, &[parse("u^2").unwrap()], 2).unwrap();
        let (h, v) = q.split(&c, 2);
        assert!(h.vertical.is_empty() && h.is_vertical());
        assert_eq!(v, q);
    }

    #[test]
    fn evolutionary_prolongation() {
        let c = line();
        let y = prolong_evolutionary(&c, &[parse("u_x").unwrap()], 2).unwrap();
        let shown: Vec<String> = y.vertical.iter().map(|(k, v)| format!("{}={}", c.var_name(k), v)).collect();
        assert_eq!(shown, ["u=u_x", "u_x=u_xx", "u_xx=u_xxx"]);
        let one = prolong_evolutionary(&c, &[Expr::one()], 3).unwrap();
        assert_eq!(one.vertical.len(), 1);
    }

    #[test]
    fn pushforward_of_square() {
        let c = line();
        let phi = Section::new(vec![parse("x^2").unwrap()]);
        let zero = Section::new(vec![Expr::zero()]);
        let t = ev_pushforward(&c, &phi, &zero, &[Expr::one()], &[Expr::one()], 2).unwrap();
        let vals: Vec<String> = t.vertical.values().map(|e| e.to_string()).collect();
        assert_eq!(t.horizontal, vec![Expr::one()]);
        assert_eq!(vals, ["2", "2", "0"]);
    }
}
