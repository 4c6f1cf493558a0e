use std::collections::BTreeMap;

use serde::Serialize;

use super::VariationalError;
use crate::expr::Expr;
use crate::jet::split_assignments;
use crate::weil::monomial::generator_name;
use crate::weil::{taylor_extend_in, WeilAlgebra, WeilElement};

/// Truncated Taylor polynomial of a function at a point, in the
/// displacement variables `h` (one variable) or `h_1..h_n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expansion {
    pub vars: Vec<String>,
    pub point: Vec<Expr>,
    pub order: u32,
    pub displacements: Vec<String>,
    pub polynomial: Expr,
    #[serde(skip)]
    pub element: WeilElement,
}

/// Parses `x=0,y=1/2` into an ordered list of assignments.
pub fn parse_point(text: &str) -> Result<Vec<(String, Expr)>, VariationalError> {
    let mut out: Vec<(String, Expr)> = Vec::new();
    for piece in split_assignments(text) {
        let (name, value) = piece.split_once('=').ok_or_else(|| VariationalError::Point(piece.to_string()))?;
        let name = name.trim().to_string();
        let value = crate::expr::parse(value).map_err(|e| VariationalError::Point(format!("{piece}: {e}")))?;
        if !value.free_vars().is_empty() {
            return Err(VariationalError::Point(format!("{piece}: value must be a constant")));
        }
        if out.iter().any(|(n, _)| *n == name) {
            return Err(VariationalError::Point(format!("`{name}` assigned twice")));
        }
        out.push((name, value));
    }
    if out.is_empty() {
        return Err(VariationalError::Point("no variables".into()));
    }
    Ok(out)
}

/// `f(p + h)` over `D^n(k)`: the order-`k` jet of `f` at `p`.
pub fn perturb_expand(f: &Expr, at: &[(String, Expr)], order: u32) -> Result<Expansion, VariationalError> {
    if at.is_empty() {
        return Err(VariationalError::Point("no variables".into()));
    }
    let n = at.len();
    let algebra = WeilAlgebra::disk(n, order)?;
    let vars: Vec<String> = at.iter().map(|(v, _)| v.clone()).collect();
    let args = at
        .iter()
        .enumerate()
        .map(|(i, (_, p))| WeilElement::constant(&algebra, p).add(&WeilElement::generator(&algebra, i)?))
        .collect::<Result<Vec<_>, _>>()?;
    let element = taylor_extend_in(&algebra, f, &vars, &args)?;
    let displacements: Vec<String> =
        if n == 1 { vec!["h".to_string()] } else { (1..=n).map(|i| format!("h_{i}")).collect() };
    let rename: BTreeMap<String, String> = (0..n).map(generator_name).zip(displacements.iter().cloned()).collect();
    let polynomial = element.to_expr().rename(&|v| rename.get(v).cloned());
    Ok(Expansion { vars, point: at.iter().map(|(_, p)| p.clone()).collect(), order, displacements, polynomial, element })
}

/// Both sides of the chart-change check for one variable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChartCheck {
    /// Expansion of `S ∘ ψ` at `q`.
    pub lhs: Expr,
    /// Expansion of `S` at `ψ(q)` with `h` replaced by the jet of `ψ − ψ(q)`
    /// and truncated.
    pub rhs: Expr,
    pub holds: bool,
}

/// Expanding `S ∘ ψ` at `q` agrees with substituting the order-`k` jet of
/// `ψ` at `q` into the expansion of `S` at `ψ(q)`.
pub fn chart_covariance(s: &Expr, psi: &Expr, var: &str, q: &Expr, order: u32) -> Result<ChartCheck, VariationalError> {
    let at = |p: &Expr| vec![(var.to_string(), p.clone())];
    let lhs = perturb_expand(&s.subs_var(var, psi), &at(q), order)?;
    let p = psi.subs_var(var, q);
    let jet = perturb_expand(psi, &at(q), order)?;
    let outer = perturb_expand(s, &at(&p), order)?;
    let delta = jet.element.nilpotent_part().to_expr();
    let algebra = lhs.element.algebra().clone();
    let substituted = outer.element.to_expr().subs_var(&generator_name(0), &delta);
    let rhs = WeilElement::from_expr(&algebra, &substituted)?;
    let holds = rhs == lhs.element;
    let h = |e: &WeilElement| e.to_expr().rename(&|v| (v == generator_name(0)).then(|| "h".to_string()));
    Ok(ChartCheck { lhs: lhs.polynomial, rhs: h(&rhs), holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::weil::Mode;

    #[test]
    fn cosine_at_zero() {
        let e = perturb_expand(&parse("cos(x)").unwrap(), &parse_point("x=0").unwrap(), 4).unwrap();
        assert_eq!(e.element.mode(), Mode::Rational);
        assert_eq!(e.polynomial, parse("1 - h^2/2 + h^4/24").unwrap());
    }

    #[test]
    fn linear_functions_are_exact() {
        for k in 1..5 {
            let e = perturb_expand(&parse("3*x + 1").unwrap(), &parse_point("x=2").unwrap(), k).unwrap();
            assert_eq!(e.polynomial, parse("7 + 3*h").unwrap());
        }
    }

    #[test]
    fn two_variables() {
        let e = perturb_expand(&parse("x*y^2").unwrap(), &parse_point("x=1, y=2").unwrap(), 2).unwrap();
        assert_eq!(e.displacements, ["h_1", "h_2"]);
        assert_eq!(e.polynomial, parse("4 + 4*h_1 + 4*h_2 + 4*h_1*h_2 + h_2^2").unwrap());
    }

    #[test]
    fn chart_change() {
        let psi = parse("x + x^2").unwrap();
        for s in ["cos(x)", "exp(x)", "x^3 - x"] {
            let c = chart_covariance(&parse(s).unwrap(), &psi, "x", &Expr::zero(), 3).unwrap();
            assert!(c.holds, "{s}: {} vs {}", c.lhs, c.rhs);
        }
    }

    #[test]
    fn bad_points() {
        for bad in ["", "x", "x=y", "x=1,x=2"] {
            assert!(parse_point(bad).is_err(), "{bad}");
        }
    }
}
