//! Seeded generators of random expressions, sections and forms for
//! property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bicomplex::{Covector, LocalForm};
use crate::expr::{Expr, Func};
use crate::jet::{JetContext, JetVar, MultiIndex, Section};

/// Reproducible source of random test inputs.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// A nonzero rational `p/q` with `|p| <= 3`, `1 <= q <= 3`.
    pub fn rational(&mut self) -> Expr {
        let mut p = self.int(-3, 3);
        if p == 0 {
            p = 1;
        }
        Expr::ratio(p, self.int(1, 3))
    }

    /// Random polynomial with up to `terms` monomials of degree <= `max_deg`.
    pub fn polynomial<S: AsRef<str>>(&mut self, vars: &[S], terms: usize, max_deg: u32) -> Expr {
        let mut out = Vec::new();
        for _ in 0..terms.max(1) {
            let mut factors = vec![self.rational()];
            let deg = self.rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                if let Some(v) = vars.choose(&mut self.rng) {
                    factors.push(Expr::var(v.as_ref()));
                }
            }
            out.push(Expr::mul(factors));
        }
        Expr::add(out)
    }

    /// Random smooth expression built from `+`, `*`, small powers, `sin`,
    /// `cos` and `exp`; defined everywhere.
    pub fn smooth<S: AsRef<str>>(&mut self, vars: &[S], depth: u32) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            return match vars.choose(&mut self.rng) {
                Some(v) if self.rng.gen_bool(0.8) => Expr::var(v.as_ref()),
                _ => self.rational(),
            };
        }
        match self.rng.gen_range(0..5) {
            0 => {
                let a = self.smooth(vars, depth - 1);
                let b = self.smooth(vars, depth - 1);
                a + b
            }
            1 => {
                let a = self.smooth(vars, depth - 1);
                let b = self.smooth(vars, depth - 1);
                a * b
            }
            2 => Expr::powi(self.smooth(vars, depth - 1), self.int(2, 3)),
            3 => {
                let f = *[Func::Sin, Func::Cos, Func::Exp].choose(&mut self.rng).expect("nonempty");
                let arg = self.smooth(vars, depth - 1);
                Expr::apply(f, arg)
            }
            _ => self.rational() * self.smooth(vars, depth - 1),
        }
    }

    /// A random jet variable of order at most `order`.
    pub fn jet_var(&mut self, ctx: &JetContext, order: usize) -> JetVar {
        let a = self.rng.gen_range(0..ctx.fields().len());
        let k = self.rng.gen_range(0..=order);
        let idx = (0..k).map(|_| self.rng.gen_range(0..ctx.dim())).collect();
        JetVar::new(a, MultiIndex::new(idx))
    }

    /// Random function on the jet bundle of order at most `order`.
    pub fn jet_expr(&mut self, ctx: &JetContext, order: usize, terms: usize) -> Expr {
        let mut out = Vec::new();
        for _ in 0..terms.max(1) {
            let mut factors = vec![self.rational()];
            for _ in 0..self.rng.gen_range(1..=2) {
                let v = if self.rng.gen_bool(0.2) {
                    Expr::var(ctx.coords().choose(&mut self.rng).expect("coordinates").clone())
                } else {
                    ctx.var_expr(&self.jet_var(ctx, order))
                };
                factors.push(v);
            }
            let mut term = Expr::mul(factors);
            if self.rng.gen_bool(0.25) {
                let f = *[Func::Sin, Func::Cos, Func::Exp].choose(&mut self.rng).expect("nonempty");
                term = Expr::apply(f, term);
            }
            out.push(term);
        }
        Expr::add(out)
    }

    /// Trigonometric polynomial in the coordinates with integer
    /// frequencies, so periodic on `[0, 2π)` in every coordinate.
    pub fn trig_polynomial<S: AsRef<str>>(&mut self, coords: &[S], terms: usize) -> Expr {
        let mut out = Vec::new();
        for _ in 0..terms.max(1) {
            let mut phase = Vec::new();
            for c in coords {
                let k = self.int(-2, 2);
                if k != 0 {
                    phase.push(Expr::int(k) * Expr::var(c.as_ref()));
                }
            }
            if phase.is_empty() {
                phase.push(Expr::var(coords[0].as_ref()));
            }
            let f = if self.rng.gen_bool(0.5) { Func::Sin } else { Func::Cos };
            out.push(self.rational() * Expr::apply(f, Expr::add(phase)));
        }
        Expr::add(out)
    }

    pub fn trig_section(&mut self, ctx: &JetContext, terms: usize) -> Section {
        let components = (0..ctx.fields().len()).map(|_| self.trig_polynomial(ctx.coords(), terms)).collect();
        Section::new(components)
    }

    /// Random homogeneous `(p, q)` form with up to `terms` terms; may be zero
    /// when `p` exceeds the base dimension.
    pub fn form(&mut self, ctx: &JetContext, order: usize, p: usize, q: usize, terms: usize) -> LocalForm {
        let mut out = LocalForm::zero(ctx);
        for _ in 0..terms.max(1) {
            let mut dxs: Vec<usize> = (0..ctx.dim()).collect();
            dxs.shuffle(&mut self.rng);
            if p > dxs.len() {
                continue;
            }
            let mut covs: Vec<Covector> = dxs[..p].iter().map(|&mu| Covector::Dx(mu)).collect();
            for _ in 0..q {
                covs.push(Covector::Theta(self.jet_var(ctx, order)));
            }
            let coeff = self.jet_expr(ctx, order, 2);
            out = out.add(&LocalForm::term(ctx, coeff, covs)).expect("same context");
        }
        out
    }
}
