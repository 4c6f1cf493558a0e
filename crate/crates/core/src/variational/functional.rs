use std::sync::Arc;

use serde::Serialize;

use super::grid::{binding_at, Grid};
use super::{euler_lagrange, Jacobi, Lagrangian, VariationalError};
use crate::expr::{Binding, Expr};
use crate::jet::{JetContext, Section};
use crate::weil::{Coeffs, WeilAlgebra, WeilElement};

/// Default on-shell tolerance for residuals.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Central-difference step of the first-variation left-hand side.
pub const FD_STEP: f64 = 1e-5;

/// Jet values of a prolonged section sampled at a list of points.
struct Columns {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Columns {
    fn new(ctx: &JetContext, section: &Section, n: usize, points: &[Vec<f64>]) -> Result<Columns, VariationalError> {
        let p = ctx.prolong(section, n)?;
        let names = p.values.keys().map(|v| ctx.var_name(v)).collect();
        let mut rows = Vec::with_capacity(points.len());
        for x in points {
            let b = binding_at(ctx, x);
            let row = p
                .values
                .values()
                .map(|e| e.eval(&b))
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|source| VariationalError::Eval { point: x.clone(), source })?;
            rows.push(row);
        }
        Ok(Columns { names, rows })
    }

    /// Binding of coordinates and jet variables at point `k` for the section
    /// `φ + s Z` (with `other = Z`).
    fn binding(&self, ctx: &JetContext, x: &[f64], k: usize, other: Option<(&Columns, f64)>) -> Binding {
        let mut b = binding_at(ctx, x);
        for (j, name) in self.names.iter().enumerate() {
            let mut v = self.rows[k][j];
            if let Some((z, s)) = other {
                v += s * z.rows[k][j];
            }
            b.insert(name.clone(), v);
        }
        b
    }
}

fn eval(e: &Expr, b: &Binding, x: &[f64]) -> Result<f64, VariationalError> {
    e.eval(b).map_err(|source| VariationalError::Eval { point: x.to_vec(), source })
}

/// Pointwise Euler–Lagrange residual along a section.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Residual {
    /// `max_{a, p} |EL_a(j φ)(p)|`.
    pub max: f64,
    pub tolerance: f64,
    pub on_shell: bool,
    /// `|EL_a|` per field, per grid node in row-major order.
    pub values: Vec<Vec<f64>>,
}

pub fn residual(l: &Lagrangian, phi: &Section, grid: &Grid, tolerance: f64) -> Result<Residual, VariationalError> {
    let ctx = l.context();
    let el = euler_lagrange(l);
    let samples = grid.samples(ctx)?;
    let points: Vec<Vec<f64>> = samples.iter().map(|s| s.point.clone()).collect();
    let cols = Columns::new(ctx, phi, el.order(), &points)?;
    let mut values = vec![Vec::with_capacity(points.len()); el.equations.len()];
    let mut max = 0.0f64;
    for (k, x) in points.iter().enumerate() {
        let b = cols.binding(ctx, x, k, None);
        for (a, e) in el.equations.iter().enumerate() {
            let v = eval(e, &b, x)?.abs();
            max = max.max(v);
            values[a].push(v);
        }
    }
    Ok(Residual { max, tolerance, on_shell: max <= tolerance, values })
}

/// `∫ L̄(x, ∂_I φ(x)) dx` by grid quadrature.
pub fn action(l: &Lagrangian, phi: &Section, grid: &Grid) -> Result<f64, VariationalError> {
    let ctx = l.context();
    let samples = grid.samples(ctx)?;
    let points: Vec<Vec<f64>> = samples.iter().map(|s| s.point.clone()).collect();
    let cols = Columns::new(ctx, phi, l.order(), &points)?;
    let mut sum = 0.0;
    for (k, s) in samples.iter().enumerate() {
        sum += s.weight * eval(l.density(), &cols.binding(ctx, &s.point, k, None), &s.point)?;
    }
    Ok(sum)
}

/// The action of a section whose components involve the generators
/// `e1..em` of `algebra`: the integrand is Taylor-extended over the algebra
/// and integrated coefficientwise.
pub fn action_in(
    l: &Lagrangian,
    phi: &Section,
    algebra: &Arc<WeilAlgebra>,
    grid: &Grid,
) -> Result<WeilElement, VariationalError> {
    let ctx = l.context();
    let p = ctx.prolong(phi, l.order())?;
    let integrand = ctx.substitute(l.density(), &p)?;
    let element = WeilElement::from_expr(algebra, &integrand)?;
    let coeffs = element.coeff_exprs().iter().map(|c| grid.integrate(ctx, c)).collect::<Result<Vec<f64>, _>>()?;
    Ok(WeilElement::from_coeffs(algebra.clone(), Coeffs::Float(coeffs))?)
}

/// Both sides of `d/dt S(φ + tZ)|_{t=0} = ∫ Σ_a EL_a(j φ) Z^a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FirstVariation {
    /// Central difference of the action with step [`FD_STEP`].
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    /// False on grids with a non-periodic axis, where boundary terms are
    /// not accounted for.
    pub boundary_free: bool,
}

pub fn first_variation(l: &Lagrangian, phi: &Section, z: &Section, grid: &Grid) -> Result<FirstVariation, VariationalError> {
    let ctx = l.context();
    let el = euler_lagrange(l);
    let n = l.order().max(el.order());
    let samples = grid.samples(ctx)?;
    let points: Vec<Vec<f64>> = samples.iter().map(|s| s.point.clone()).collect();
    let cp = Columns::new(ctx, phi, n, &points)?;
    let cz = Columns::new(ctx, z, n, &points)?;
    let h = FD_STEP;
    let (mut lhs, mut rhs) = (0.0, 0.0);
    for (k, s) in samples.iter().enumerate() {
        let x = &s.point;
        let plus = eval(l.density(), &cp.binding(ctx, x, k, Some((&cz, h))), x)?;
        let minus = eval(l.density(), &cp.binding(ctx, x, k, Some((&cz, -h))), x)?;
        lhs += s.weight * (plus - minus) / (2.0 * h);
        let b = cp.binding(ctx, x, k, None);
        let zb = cz.binding(ctx, x, k, None);
        for (a, e) in el.equations.iter().enumerate() {
            let za = zb[&ctx.fields()[a]];
            rhs += s.weight * eval(e, &b, x)? * za;
        }
    }
    Ok(FirstVariation { lhs, rhs, gap: (lhs - rhs).abs(), boundary_free: grid.is_periodic() })
}

/// Symbolic Jacobi operator against the finite-difference linearization
/// `(EL(φ + tZ) − EL(φ − tZ))/2t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JacobiCheck {
    pub step: f64,
    pub points: usize,
    pub max_error: f64,
}

pub fn jacobi_fd_check(
    l: &Lagrangian,
    phi: &Section,
    z: &Section,
    points: &[Vec<f64>],
    step: f64,
) -> Result<JacobiCheck, VariationalError> {
    let ctx = l.context();
    let el = euler_lagrange(l);
    let jacobi = Jacobi::new(&el);
    let along = jacobi.apply(phi, z)?;
    let cp = Columns::new(ctx, phi, el.order(), points)?;
    let cz = Columns::new(ctx, z, el.order(), points)?;
    let mut max_error = 0.0f64;
    for (k, x) in points.iter().enumerate() {
        let bp = cp.binding(ctx, x, k, Some((&cz, step)));
        let bm = cp.binding(ctx, x, k, Some((&cz, -step)));
        let bx = binding_at(ctx, x);
        for (e, j) in el.equations.iter().zip(&along) {
            let fd = (eval(e, &bp, x)? - eval(e, &bm, x)?) / (2.0 * step);
            max_error = max_error.max((fd - eval(j, &bx, x)?).abs());
        }
    }
    Ok(JacobiCheck { step, points: points.len(), max_error })
}

/// `max |J_φ(Z)|` over the grid.
pub fn jacobi_residual(l: &Lagrangian, phi: &Section, z: &Section, grid: &Grid) -> Result<f64, VariationalError> {
    let ctx = l.context();
    let along = Jacobi::derive(l).apply(phi, z)?;
    let mut max = 0.0f64;
    for s in grid.samples(ctx)? {
        let b = binding_at(ctx, &s.point);
        for j in &along {
            max = max.max(eval(j, &b, &s.point)?.abs());
        }
    }
    Ok(max)
}
