use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::VariationalError;
use crate::expr::{Binding, Expr};
use crate::jet::JetContext;

/// One uniformly sampled coordinate axis.
///
/// Periodic axes hold `count` nodes `lo + k h` with `h = (hi − lo)/count`
/// and use the rectangle rule; others hold `count` nodes including both
/// ends and use the composite trapezoid rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub periodic: bool,
}

impl Axis {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, count: usize, periodic: bool) -> Result<Axis, VariationalError> {
        let name = name.into();
        if count < 2 {
            return Err(VariationalError::Grid(format!("axis `{name}` needs at least 2 points")));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(VariationalError::Grid(format!("axis `{name}` needs finite bounds lo < hi")));
        }
        Ok(Axis { name, lo, hi, count, periodic })
    }

    pub fn spacing(&self) -> f64 {
        if self.periodic {
            (self.hi - self.lo) / self.count as f64
        } else {
            (self.hi - self.lo) / (self.count - 1) as f64
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.count).map(|k| self.lo + k as f64 * h).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut w = vec![h; self.count];
        if !self.periodic {
            w[0] = h / 2.0;
            w[self.count - 1] = h / 2.0;
        }
        w
    }
}

/// Tensor-product grid over the base coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub axes: Vec<Axis>,
}

/// A grid node and its quadrature weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub point: Vec<f64>,
    pub weight: f64,
}

fn bound(text: &str) -> Result<f64, VariationalError> {
    let bad = || VariationalError::Grid(format!("invalid bound `{text}`"));
    let e = crate::expr::parse(text).map_err(|_| bad())?;
    let binding: Binding = [("pi".to_string(), PI)].into_iter().collect();
    e.eval(&binding).map_err(|_| bad())
}

impl Grid {
    /// Parses `name:lo:hi:count[:periodic]`, comma separated. Bounds may be
    /// constant expressions in `pi`.
    pub fn parse(text: &str) -> Result<Grid, VariationalError> {
        let mut axes = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let fields: Vec<&str> = part.split(':').map(str::trim).collect();
            let periodic = match fields.get(4) {
                None => false,
                Some(&"periodic") => true,
                Some(other) => return Err(VariationalError::Grid(format!("unknown axis flag `{other}`"))),
            };
            if !(4..=5).contains(&fields.len()) {
                return Err(VariationalError::Grid(format!("`{part}`: expected name:lo:hi:count[:periodic]")));
            }
            let count = fields[3]
                .parse::<usize>()
                .map_err(|_| VariationalError::Grid(format!("invalid point count `{}`", fields[3])))?;
            if axes.iter().any(|a: &Axis| a.name == fields[0]) {
                return Err(VariationalError::Grid(format!("axis `{}` given twice", fields[0])));
            }
            axes.push(Axis::new(fields[0], bound(fields[1])?, bound(fields[2])?, count, periodic)?);
        }
        if axes.is_empty() {
            return Err(VariationalError::Grid("no axes".into()));
        }
        Ok(Grid { axes })
    }

    /// `[0, 2π)` with `count` points in each listed coordinate.
    pub fn periodic<S: AsRef<str>>(coords: &[S], count: usize) -> Grid {
        Grid { axes: coords.iter().map(|c| Axis::new(c.as_ref(), 0.0, 2.0 * PI, count, true).expect("valid axis")).collect() }
    }

    pub fn is_periodic(&self) -> bool {
        self.axes.iter().all(|a| a.periodic)
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Axes in the coordinate order of `ctx`.
    pub fn aligned(&self, ctx: &JetContext) -> Result<Vec<&Axis>, VariationalError> {
        if self.axes.len() != ctx.dim() {
            return Err(VariationalError::Grid(format!(
                "grid has {} axes, the context has {} coordinates",
                self.axes.len(),
                ctx.dim()
            )));
        }
        ctx.coords()
            .iter()
            .map(|c| {
                self.axes
                    .iter()
                    .find(|a| &a.name == c)
                    .ok_or_else(|| VariationalError::Grid(format!("no axis for coordinate `{c}`")))
            })
            .collect()
    }

    /// All nodes in row-major order over the coordinates of `ctx`.
    pub fn samples(&self, ctx: &JetContext) -> Result<Vec<Sample>, VariationalError> {
        let axes = self.aligned(ctx)?;
        let nodes: Vec<Vec<f64>> = axes.iter().map(|a| a.nodes()).collect();
        let weights: Vec<Vec<f64>> = axes.iter().map(|a| a.weights()).collect();
        let mut out = vec![Sample { point: Vec::new(), weight: 1.0 }];
        for (n, w) in nodes.iter().zip(&weights) {
            out = out
                .iter()
                .flat_map(|s| {
                    n.iter().zip(w).map(move |(x, wx)| {
                        let mut point = s.point.clone();
                        point.push(*x);
                        Sample { point, weight: s.weight * wx }
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Quadrature of an expression in the coordinates.
    pub fn integrate(&self, ctx: &JetContext, f: &Expr) -> Result<f64, VariationalError> {
        let mut sum = 0.0;
        for s in self.samples(ctx)? {
            sum += s.weight * eval_at(ctx, f, &s.point)?;
        }
        Ok(sum)
    }
}

pub(crate) fn binding_at(ctx: &JetContext, point: &[f64]) -> Binding {
    ctx.coords().iter().cloned().zip(point.iter().copied()).collect()
}

pub(crate) fn eval_at(ctx: &JetContext, f: &Expr, point: &[f64]) -> Result<f64, VariationalError> {
    f.eval(&binding_at(ctx, point)).map_err(|source| VariationalError::Eval { point: point.to_vec(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_weights() {
        let g = Grid::parse("t:0:2*pi:4:periodic, x:-1:1:3").unwrap();
        assert!(!g.is_periodic());
        assert_eq!(g.axes[0].nodes(), vec![0.0, PI / 2.0, PI, 1.5 * PI]);
        assert_eq!(g.axes[1].weights(), vec![0.5, 1.0, 0.5]);
        let ctx = JetContext::new(["t", "x"], ["u"]).unwrap();
        let s = g.samples(&ctx).unwrap();
        assert_eq!(s.len(), 12);
        assert_eq!(s[1].point, vec![0.0, 0.0]);
        let total: f64 = s.iter().map(|s| s.weight).sum();
        assert!((total - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in ["x:0:1", "x:0:1:1", "x:1:0:4", "x:0:1:4:loop", "x:0:1:4,x:0:1:4", "x:a:1:4", ""] {
            assert!(Grid::parse(bad).is_err(), "{bad}");
        }
        let ctx = JetContext::new(["t", "x"], ["u"]).unwrap();
        assert!(Grid::parse("x:0:1:4").unwrap().samples(&ctx).is_err());
    }

    #[test]
    fn rectangle_rule_is_spectral_on_periodic_data() {
        let ctx = JetContext::new(["x"], ["u"]).unwrap();
        let g = Grid::periodic(&["x"], 16);
        let v = g.integrate(&ctx, &crate::expr::parse("cos(x)^2 + sin(3*x)").unwrap()).unwrap();
        assert!((v - PI).abs() < 1e-13);
    }
}
