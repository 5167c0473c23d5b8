use dib_core::discrete::{update_decoders, update_encoders};
use dib_core::gaussian::linalg::eigenvalues;
use dib_core::gaussian::{b_from_encoders, fisher_identity_residual};
use dib_core::{Flag, Subset};
use serde::Serialize;

use crate::config::ResolvedSource;
use crate::error::CliError;
use crate::sweep::{Solution, Sweep};

pub const FIXED_POINT_TOL: f64 = 1e-6;
pub const LAGRANGIAN_TOL: f64 = 1e-6;
pub const FISHER_TOL: f64 = 1e-8;
pub const B_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub s: f64,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, s: f64, value: f64, threshold: f64) {
        self.checks.push(Check { name, s, value, threshold, passed: value <= threshold });
    }
}

/// Invariants of every solved row.
///
/// Discrete: one more encoder update moves no row by more than
/// [`FIXED_POINT_TOL`] (total variation), the Lagrangian identity recovers
/// `Δ` to [`LAGRANGIAN_TOL`], and the objective never increased.
/// Gaussian: the Fisher identity holds to [`FISHER_TOL`] on every nonempty
/// subset, every `B_k` has eigenvalues in `[0, 1]` up to [`B_SLACK`], and
/// the Lagrangian identity holds.
pub fn verify(sweep: &Sweep) -> Result<VerifyReport, CliError> {
    let mut report = VerifyReport::default();
    for sol in &sweep.solutions {
        let p = sol.point();
        report.push("lagrangian_gap", p.s, p.diagnostics.lagrangian_gap, LAGRANGIAN_TOL);
        let ascent = if p.diagnostics.flags.contains(&Flag::DescentViolation) { 1.0 } else { 0.0 };
        report.push("descent", p.s, ascent, 0.0);
        match (sol, &sweep.source) {
            (Solution::Discrete(d), ResolvedSource::Discrete(src)) => {
                let decoders = update_decoders(src, &d.encoders)?;
                let next = update_encoders(src, &d.encoders, &decoders, p.s)?;
                report.push("fixed_point_residual", p.s, d.encoders.max_row_distance(&next), FIXED_POINT_TOL);
            }
            (Solution::Gaussian(g), ResolvedSource::Gaussian(src)) => {
                let kk = src.num_encoders();
                let mut worst = 0.0f64;
                for subset in Subset::all(kk).filter(|s| !s.is_empty()) {
                    worst = worst.max(fisher_identity_residual(src, &g.encoders, subset)?);
                }
                report.push("fisher_residual", p.s, worst, FISHER_TOL);
                let b = b_from_encoders(src, &g.encoders)?;
                let mut excess = 0.0f64;
                for bk in b.matrices() {
                    for v in eigenvalues(bk).iter() {
                        excess = excess.max(-v).max(v - 1.0);
                    }
                }
                report.push("b_eigenvalue_excess", p.s, excess, B_SLACK);
            }
            _ => unreachable!("solutions match their source"),
        }
    }
    Ok(report)
}
