use std::fmt;

use serde::Serialize;

use super::covector_name;
use crate::expr::ZeroTest;
use crate::jet::JetContext;
use crate::random::Sampler;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    /// Input form and offending term of the first failure.
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub trials: usize,
    pub seed: u64,
    pub order: usize,
    pub checks: Vec<IdentityCheck>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.failed == 0 { "pass" } else { "FAIL" };
            writeln!(f, "{verdict} {}: {}/{} forms", c.name, c.passed, c.passed + c.failed)?;
            if let Some(ce) = &c.counterexample {
                writeln!(f, "  counterexample: {ce}")?;
            }
        }
        Ok(())
    }
}

/// Checks `d_H² = 0`, `d_V² = 0`, `d_H d_V + d_V d_H = 0` and `d² = 0` on
/// `trials` random forms of jet order at most `order` and bidegree at most
/// `(2, 2)`.
pub fn verify_identities(ctx: &JetContext, order: usize, trials: usize, seed: u64, zero: &ZeroTest) -> VerifyReport {
    let names = ["d_H^2 = 0", "d_V^2 = 0", "d_H d_V + d_V d_H = 0", "(d_H + d_V)^2 = 0"];
    let mut checks: Vec<IdentityCheck> =
        names.iter().map(|&name| IdentityCheck { name, passed: 0, failed: 0, counterexample: None }).collect();
    let mut sampler = Sampler::new(seed);
    let max_p = ctx.dim().min(2) as i64;
    for _ in 0..trials {
        let p = sampler.int(0, max_p) as usize;
        let q = sampler.int(0, 2) as usize;
        let w = sampler.form(ctx, order, p, q, 2);
        let dh = w.d_h();
        let dv = w.d_v();
        let results = [
            dh.d_h(),
            dv.d_v(),
            dh.d_v().add(&dv.d_h()).expect("same context"),
            w.d().d(),
        ];
        for (check, r) in checks.iter_mut().zip(results) {
            match r.nonzero_term(zero) {
                None => check.passed += 1,
                Some((basis, coeff)) => {
                    check.failed += 1;
                    if check.counterexample.is_none() {
                        let covs: Vec<String> = basis.covectors().iter().map(|c| covector_name(ctx, c)).collect();
                        check.counterexample = Some(format!("omega = {w}; coefficient of [{}] is {coeff}", covs.join(" & ")));
                    }
                }
            }
        }
    }
    VerifyReport { trials, seed, order, checks }
}
