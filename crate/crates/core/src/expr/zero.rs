//! Probabilistic zero testing.
//!
//! An expression is declared zero when it is structurally the empty sum, or
//! when it evaluates to within `tol` of zero at every one of `samples`
//! independent random points. A nonzero analytic expression vanishes at a
//! random point with probability zero, so false `Zero` verdicts come only
//! from near-cancellation at all sampled points; the chance shrinks as
//! `samples` grows. Sampling is driven by a seeded ChaCha generator so
//! failures reproduce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Binding, Expr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroVerdict {
    Zero,
    NonZero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTest {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    /// Redraws allowed per sample when evaluation hits a domain error.
    pub max_retries: usize,
    /// Variables are drawn uniformly from `[-range, range]`.
    pub range: f64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest { samples: 12, seed: 0x00C0_FFEE, tol: 1e-9, max_retries: 32, range: 1.0 }
    }
}

impl ZeroTest {
    pub fn with_seed(seed: u64) -> Self {
        ZeroTest { seed, ..ZeroTest::default() }
    }

    pub fn verdict(&self, e: &Expr) -> ZeroVerdict {
        if e.is_zero() {
            return ZeroVerdict::Zero;
        }
        match self.scan(e) {
            Scan::AllSmall => ZeroVerdict::Zero,
            Scan::Witness(..) | Scan::NoValidSample => ZeroVerdict::NonZero,
        }
    }

    pub fn is_zero(&self, e: &Expr) -> bool {
        self.verdict(e) == ZeroVerdict::Zero
    }

    /// A binding at which `e` is visibly nonzero, with the value found there.
    pub fn witness(&self, e: &Expr) -> Option<(Binding, f64)> {
        if e.is_zero() {
            return None;
        }
        match self.scan(e) {
            Scan::Witness(b, v) => Some((b, v)),
            _ => None,
        }
    }

    fn scan(&self, e: &Expr) -> Scan {
        let vars: Vec<String> = e.free_vars().into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut valid = 0usize;
        for _ in 0..self.samples {
            for _ in 0..=self.max_retries {
                let binding: Binding = vars
                    .iter()
                    .map(|v| (v.clone(), rng.gen_range(-self.range..=self.range)))
                    .collect();
                match e.eval(&binding) {
                    Ok(value) if value.is_finite() => {
                        valid += 1;
                        if value.abs() > self.tol {
                            return Scan::Witness(binding, value);
                        }
                        break;
                    }
                    _ => continue,
                }
            }
        }
        if valid == 0 {
            Scan::NoValidSample
        } else {
            Scan::AllSmall
        }
    }
}

enum Scan {
    AllSmall,
    Witness(Binding, f64),
    NoValidSample,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn structural_zero() {
        assert_eq!(ZeroTest::default().verdict(&parse("x - x").unwrap()), ZeroVerdict::Zero);
    }

    #[test]
    fn pythagorean_identity_by_sampling() {
        let e = parse("sin(x)^2 + cos(x)^2 - 1").unwrap();
        assert!(!e.is_zero());
        assert_eq!(ZeroTest::default().verdict(&e), ZeroVerdict::Zero);
    }

    #[test]
    fn variable_is_nonzero() {
        let zt = ZeroTest::default();
        assert_eq!(zt.verdict(&parse("x").unwrap()), ZeroVerdict::NonZero);
        assert!(zt.witness(&parse("x").unwrap()).is_some());
    }

    #[test]
    fn domain_errors_are_resampled() {
        // log needs x > 0: roughly half the draws fail
        let e = parse("exp(log(x)) - x").unwrap();
        assert_eq!(ZeroTest::default().verdict(&e), ZeroVerdict::Zero);
    }

    #[test]
    fn nowhere_defined_is_not_zero() {
        let e = parse("log(-1 - x^2)").unwrap();
        assert_eq!(ZeroTest::default().verdict(&e), ZeroVerdict::NonZero);
    }

    #[test]
    fn seed_changes_samples_not_verdicts() {
        let e = parse("tan(x)*cos(x) - sin(x)").unwrap();
        for seed in 0..5 {
            assert!(ZeroTest::with_seed(seed).is_zero(&e));
        }
    }
}
