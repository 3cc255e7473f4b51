//! Grid-empirical certificates of global weak sharp minimality.
//!
//! Every certificate samples the box of a [`ProblemInstance`] on a tensor
//! grid, locates the grid argmin, evaluates a nondegeneracy condition at the
//! remaining points and then checks the weak sharpness inequality directly.
//! Infima over the whole space become minima over the grid, so a verdict is
//! evidence about the sampled box and never a proof.

mod cone;
mod constrained;
mod errorbound;
mod exhaust;
mod grid;
mod penalty;
mod problem;
mod report;
mod sweep;
mod table;
mod unconstrained;

use alloc::string::String;
use alloc::vec::Vec;

pub use cone::{capped_cone_distance, nnls, project_onto_cone, CappedConeDistance};
pub use constrained::{certify_constrained, estimate_lipschitz};
pub use errorbound::check_error_bound;
pub use exhaust::{certify_constrained_exhauster, certify_exhauster, ExhausterSource};
pub use grid::{Grid, NearestSet};
pub use penalty::{penalty_demcoqd, PenaltyDemcoqd};
pub use problem::{Constraints, HalfSpace, Options, ProblemInstance, Tolerances, MAX_GRID_POINTS};
pub use report::*;
pub use table::{grid_table, GridRow};
pub use unconstrained::{
    certify_qd, detect_argmin, smoothness_probe, strong_slope_estimate, verify_wsharp_inequality, wsharp_check,
};

use crate::error::Result;
use sweep::Sweep;

/// Steps of the halving probe toward the argmin set.
const PROBE_STEPS: u32 = 20;

/// Allowed shortfall in the cross-check between strong slope and condition value.
pub const SLOPE_MARGIN: f64 = 1e-3;

pub(crate) fn base_report(s: &Sweep<'_>, kind: ReportKind) -> CertificateReport {
    CertificateReport {
        kind,
        verdict: Verdict::Inconclusive,
        summary: String::new(),
        disclaimer: String::from(DISCLAIMER),
        seed: s.p.seed,
        grid: s.grid_summary(),
        backend: None,
        approx: false,
        argmin: s.argmin_summary(),
        condition_holds: None,
        tau: None,
        zeta: None,
        probe: None,
        check: None,
        slope_check: None,
        smoothness: Vec::new(),
        penalty: None,
        exhauster: None,
        error_bound: None,
        notes: Vec::new(),
    }
}

/// Walks from each rim point toward its nearest argmin point by halving and
/// records the smallest condition value and modulus ratio met on the way.
/// `condition` returns `None` where it cannot be evaluated.
pub(crate) fn probe<C>(s: &Sweep<'_>, condition: C) -> Result<Option<Probe>>
where
    C: Fn(&[f64]) -> Result<Option<f64>> + Sync + Send,
{
    let rim = s.outer_rim();
    if rim.is_empty() {
        return Ok(None);
    }
    let f = &s.p.objective;
    let per_point = crate::par::map(&rim, |&i| -> Result<(f64, Vec<f64>, f64)> {
        let x = s.grid.point(i);
        let (j, _) = s.argmin.nearest(x).expect("argmin nonempty");
        let a = s.argmin.point(j);
        let mut best = (f64::INFINITY, x.to_vec(), f64::INFINITY);
        let mut y = alloc::vec![0.0; x.len()];
        for k in 1..=PROBE_STEPS {
            let w = libm::ldexp(1.0, -(k as i32));
            for c in 0..x.len() {
                y[c] = a[c] + w * (x[c] - a[c]);
            }
            let fy = match f.evaluate(&y) {
                Ok(v) => v,
                Err(_) => continue,
            };
            if fy <= s.inf + s.tol {
                break;
            }
            if let Some(c) = condition(&y)? {
                if c < best.0 {
                    best.0 = c;
                    best.1 = y.clone();
                }
            }
            let d = s.argmin.distance(&y);
            best.2 = best.2.min((fy - s.inf) / d);
        }
        Ok(best)
    });
    let mut condition: Option<(f64, Vec<f64>)> = None;
    let mut sigma_hat: Option<f64> = None;
    for r in per_point {
        let (c, w, sh) = r?;
        if c.is_finite() && condition.as_ref().is_none_or(|b| c < b.0) {
            condition = Some((c, w));
        }
        if sh.is_finite() {
            sigma_hat = Some(sigma_hat.map_or(sh, |b| b.min(sh)));
        }
    }
    if condition.is_none() && sigma_hat.is_none() {
        // Every probe segment fell into the argmin band at once.
        return Ok(None);
    }
    let (condition, condition_witness) = condition.unzip();
    let out = Probe { points_probed: rim.len(), condition, condition_witness, sigma_hat };
    Ok(Some(out))
}

/// Shared verdict logic for condition-based certificates.
///
/// `condition` is the grid infimum of the sound condition value (`None` when
/// no feasible point lies off the argmin set) and `probe` refines it toward
/// the argmin set. The condition holds when both stay at or above the
/// vanishing tolerance; then the inequality is checked with the grid value as
/// modulus. Otherwise the largest modulus seen on the grid decides between
/// "inconclusive" (a positive modulus still works) and "refuted".
pub(crate) fn decide(
    s: &Sweep<'_>,
    report: &mut CertificateReport,
    name: &str,
    condition: Option<f64>,
    probe: Option<&Probe>,
) -> Result<()> {
    let vt = s.p.tolerances.vanishing_tol;
    let Some(cond) = condition else {
        let check = s.check(s.p.options.sigma.unwrap_or(1.0))?;
        report.condition_holds = Some(true);
        report.verdict = Verdict::CertifiedEmpirical;
        report.summary = String::from("vacuous: every feasible grid point lies in the argmin set");
        report.check = Some(check);
        return Ok(());
    };
    let refined = probe.and_then(|p| p.condition).map_or(cond, |c| cond.min(c));
    if refined >= vt {
        let check = s.check(cond)?;
        report.condition_holds = Some(true);
        if check.violation_count == 0 {
            report.verdict = Verdict::CertifiedEmpirical;
            report.summary = alloc::format!(
                "condition holds ({name} = {}); inequality verified with sigma = {} at every feasible grid point",
                fmt6(cond),
                fmt6(cond)
            );
        } else {
            report.verdict = Verdict::RefutedOnGrid;
            report.summary = alloc::format!(
                "condition value {name} = {} is positive on the grid, but the inequality with that modulus fails at {} grid points",
                fmt6(cond),
                check.violation_count
            );
        }
        report.check = Some(check);
        return Ok(());
    }
    report.condition_holds = Some(false);
    let grid_hat = s.check(0.0)?.sigma_hat.unwrap_or(f64::INFINITY);
    let sigma_hat = probe.and_then(|p| p.sigma_hat).map_or(grid_hat, |h| grid_hat.min(h));
    let sigma = s.p.options.sigma.unwrap_or(sigma_hat);
    if sigma_hat > vt {
        let check = s.check(sigma)?;
        report.verdict = Verdict::Inconclusive;
        report.summary = if check.violation_count == 0 {
            alloc::format!(
                "sufficient condition violated ({name} = {} < {}), property holds: inequality verified with sigma = {}",
                fmt6(refined),
                fmt6(vt),
                fmt6(sigma)
            )
        } else {
            alloc::format!(
                "sufficient condition violated ({name} = {} < {}); sigma = {} fails at {} points but the grid supports sigma_hat = {}",
                fmt6(refined),
                fmt6(vt),
                fmt6(sigma),
                check.violation_count,
                fmt6(sigma_hat)
            )
        };
        report.check = Some(check);
    } else {
        let check = s.check(s.p.options.sigma.unwrap_or(vt))?;
        report.verdict = Verdict::RefutedOnGrid;
        report.summary = alloc::format!(
            "sufficient condition violated ({name} = {}) and no positive modulus on the grid (sigma_hat = {})",
            fmt6(refined),
            fmt6(sigma_hat)
        );
        report.check = Some(check);
    }
    Ok(())
}

/// Six significant digits.
pub fn fmt6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return alloc::format!("{x}");
    }
    let mag = libm::floor(libm::log10(x.abs())) as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        alloc::format!("{x:.decimals$}")
    } else {
        alloc::format!("{x:.5e}")
    }
}
