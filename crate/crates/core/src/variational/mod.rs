//! Euler–Lagrange and Jacobi operators of local Lagrangians, grid
//! quadrature of actions, criticality residuals, the first-variation
//! identity and perturbative expansion.
//!
//! ```
//! use cahiers::jet::JetContext;
//! use cahiers::variational::{euler_lagrange, Lagrangian};
//!
//! let ctx = JetContext::new(["t", "x"], ["u"]).unwrap();
//! let l = Lagrangian::parse(&ctx, "0.5*(u_t^2 - u_x^2)").unwrap();
//! assert_eq!(euler_lagrange(&l).to_string(), "EL_u = -u_tt + u_xx");
//! ```

mod functional;
mod grid;
mod perturb;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::jet::{JetContext, JetError, JetVar, Section};
use crate::weil::WeilError;

pub use functional::{
    action, action_in, first_variation, jacobi_fd_check, jacobi_residual, residual, FirstVariation, JacobiCheck,
    Residual, DEFAULT_TOLERANCE, FD_STEP,
};
pub use grid::{Axis, Grid, Sample};
pub use perturb::{chart_covariance, parse_point, perturb_expand, ChartCheck, Expansion};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationalError {
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error("evaluation failed at {point:?}: {source}")]
    Eval { point: Vec<f64>, source: EvalError },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid expansion point: {0}")]
    Point(String),
}

/// Local Lagrangian `L̄(x, u^a_I) dx^1 ⋯ dx^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lagrangian {
    ctx: JetContext,
    density: Expr,
}

impl Lagrangian {
    pub fn new(ctx: &JetContext, density: Expr) -> Result<Lagrangian, VariationalError> {
        let density = ctx.normalize(&density);
        ctx.check(&density)?;
        Ok(Lagrangian { ctx: ctx.clone(), density })
    }

    pub fn parse(ctx: &JetContext, text: &str) -> Result<Lagrangian, VariationalError> {
        Ok(Lagrangian { ctx: ctx.clone(), density: ctx.parse(text)? })
    }

    pub fn context(&self) -> &JetContext {
        &self.ctx
    }

    pub fn density(&self) -> &Expr {
        &self.density
    }

    pub fn order(&self) -> usize {
        self.ctx.order(&self.density)
    }
}

/// Euler–Lagrange expressions, one per field.
#[derive(Clone, Debug, PartialEq)]
pub struct ElResult {
    pub ctx: JetContext,
    pub equations: Vec<Expr>,
}

impl ElResult {
    pub fn get(&self, field: &str) -> Option<&Expr> {
        self.ctx.field_index(field).map(|a| &self.equations[a])
    }

    pub fn order(&self) -> usize {
        self.equations.iter().map(|e| self.ctx.order(e)).max().unwrap_or(0)
    }
}

impl fmt::Display for ElResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (name, e)) in self.ctx.fields().iter().zip(&self.equations).enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "EL_{name} = {e}")?;
        }
        Ok(())
    }
}

/// `EL_a = Σ_I (−1)^{|I|} D_I(∂L̄/∂u^a_I)` over the jet variables present.
pub fn euler_lagrange(l: &Lagrangian) -> ElResult {
    let ctx = &l.ctx;
    let vars = ctx.jet_vars(&l.density);
    let equations = (0..ctx.fields().len())
        .map(|a| {
            Expr::add(vars.iter().filter(|v| v.field == a).map(|v| {
                let partial = l.density.differentiate(&ctx.var_name(v));
                let d = ctx.total_derivative_multi(&partial, &v.index);
                if v.order() % 2 == 0 {
                    d
                } else {
                    d.neg()
                }
            }))
        })
        .collect();
    ElResult { ctx: ctx.clone(), equations }
}

/// Linearized Euler–Lagrange operator: coefficients `∂EL_a/∂u^b_I`.
///
/// The perturbation `Z` is written in a mirrored context whose fields are
/// `Z` (one field) or `Z<field>` (several), so the operator reads as a
/// jet expression such as `-Z_tt + Z_xx`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jacobi {
    pub ctx: JetContext,
    pub perturbation: JetContext,
    pub coefficients: BTreeMap<(usize, JetVar), Expr>,
}

impl Jacobi {
    pub fn new(el: &ElResult) -> Jacobi {
        let ctx = &el.ctx;
        let mut coefficients = BTreeMap::new();
        for (a, e) in el.equations.iter().enumerate() {
            for v in ctx.jet_vars(e) {
                let c = e.differentiate(&ctx.var_name(&v));
                if !c.is_zero() {
                    coefficients.insert((a, v), c);
                }
            }
        }
        let mut names: Vec<String> = if ctx.fields().len() == 1 {
            vec!["Z".to_string()]
        } else {
            ctx.fields().iter().map(|f| format!("Z{f}")).collect()
        };
        while names.iter().any(|n| ctx.field_index(n).is_some()) {
            names.iter_mut().for_each(|n| n.push('0'));
        }
        let perturbation = JetContext::new(ctx.coords().to_vec(), names).expect("perturbation names are valid fields");
        Jacobi { ctx: ctx.clone(), perturbation, coefficients }
    }

    pub fn derive(l: &Lagrangian) -> Jacobi {
        Jacobi::new(&euler_lagrange(l))
    }

    /// `Σ_{b,I} ∂EL_a/∂u^b_I · Z^b_I` for each `a`, in the jet variables of
    /// both contexts.
    pub fn operator(&self) -> Vec<Expr> {
        (0..self.ctx.fields().len())
            .map(|a| {
                Expr::add(
                    self.coefficients
                        .range((a, JetVar::new(0, Default::default()))..)
                        .take_while(|((b, _), _)| *b == a)
                        .map(|((_, v), c)| c.clone() * self.perturbation.var_expr(v)),
                )
            })
            .collect()
    }

    /// The operator along `φ`, applied to `Z`, as expressions in the
    /// coordinates.
    pub fn apply(&self, phi: &Section, z: &Section) -> Result<Vec<Expr>, VariationalError> {
        let ops = self.operator();
        let n = ops.iter().map(|e| self.ctx.order(e).max(self.perturbation.order(e))).max().unwrap_or(0);
        let pp = self.ctx.prolong(phi, n)?;
        let pz = self.perturbation.prolong(z, n)?;
        ops.iter()
            .map(|e| {
                let e = self.ctx.substitute(e, &pp)?;
                Ok(self.perturbation.substitute(&e, &pz)?)
            })
            .collect()
    }

    /// Lines `dEL_a/du^b_I = coefficient`.
    pub fn coefficient_table(&self) -> Vec<(String, String, Expr)> {
        self.coefficients
            .iter()
            .map(|((a, v), c)| (format!("EL_{}", self.ctx.fields()[*a]), self.ctx.var_name(v), c.clone()))
            .collect()
    }
}

impl fmt::Display for Jacobi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, op) in self.operator().iter().enumerate() {
            writeln!(f, "J_{}[{}] = {op}", self.ctx.fields()[a], self.perturbation.fields()[a])?;
        }
        for (el, var, c) in self.coefficient_table() {
            writeln!(f, "d{el}/d{var} = {c}")?;
        }
        Ok(())
    }
}

/// Serializable summary used by the command line.
#[derive(Clone, Debug, Serialize)]
pub struct JacobiEntry {
    pub equation: String,
    pub variable: String,
    pub coefficient: Expr,
}

impl Jacobi {
    pub fn entries(&self) -> Vec<JacobiEntry> {
        self.coefficient_table()
            .into_iter()
            .map(|(equation, variable, coefficient)| JacobiEntry { equation, variable, coefficient })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn wave() -> (JetContext, Lagrangian) {
        let ctx = JetContext::new(["t", "x"], ["u"]).unwrap();
        let l = Lagrangian::parse(&ctx, "0.5*(u_t^2 - u_x^2)").unwrap();
        (ctx, l)
    }

    #[test]
    fn golden_equations() {
        let (_, l) = wave();
        assert_eq!(euler_lagrange(&l).equations[0], parse("-u_tt + u_xx").unwrap());
        let ctx = JetContext::new(["x"], ["u"]).unwrap();
        let cases = [("0.5*u_x^2 - exp(u)", "-u_xx - exp(u)"), ("0.5*u_xx^2", "u_xxxx"), ("u_x", "0")];
        for (lag, expected) in cases {
            let el = euler_lagrange(&Lagrangian::parse(&ctx, lag).unwrap());
            assert_eq!(el.equations[0], parse(expected).unwrap(), "{lag}");
        }
        let el = euler_lagrange(&Lagrangian::parse(&ctx, "0.5*u_x^2").unwrap());
        assert_eq!(el.to_string(), "EL_u = -u_xx");
    }

    #[test]
    fn coupled_fields() {
        let ctx = JetContext::new(["x"], ["u", "v"]).unwrap();
        let el = euler_lagrange(&Lagrangian::parse(&ctx, "u_x*v_x + u*v^2").unwrap());
        assert_eq!(el.get("u").unwrap(), &parse("v^2 - v_xx").unwrap());
        assert_eq!(el.get("v").unwrap(), &parse("2*u*v - u_xx").unwrap());
    }

    #[test]
    fn jacobi_operators() {
        let (_, l) = wave();
        let j = Jacobi::derive(&l);
        assert_eq!(j.operator()[0], parse("-Z_tt + Z_xx").unwrap());
        let ctx = JetContext::new(["x"], ["u"]).unwrap();
        let j = Jacobi::derive(&Lagrangian::parse(&ctx, "0.5*u_x^2 - exp(u)").unwrap());
        assert_eq!(j.operator()[0], parse("-Z_xx - exp(u)*Z").unwrap());
        let two = JetContext::new(["x"], ["u", "v"]).unwrap();
        let j = Jacobi::derive(&Lagrangian::parse(&two, "u*v").unwrap());
        assert_eq!(j.perturbation.fields(), ["Zu", "Zv"]);
        assert_eq!(j.operator(), vec![parse("Zv").unwrap(), parse("Zu").unwrap()]);
    }

    #[test]
    fn jacobi_along_a_section() {
        let (ctx, l) = wave();
        let j = Jacobi::derive(&l);
        let phi = Section::parse(&ctx, "u=sin(x-t)").unwrap();
        let z = Section::new(vec![parse("sin(x-t)").unwrap()]);
        assert!(j.apply(&phi, &z).unwrap()[0].is_zero());
    }
}
