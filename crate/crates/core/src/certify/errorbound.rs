use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::qdcalc::FuncExpr;

use super::grid::NearestSet;
use super::report::{
    ArgminSummary, CertificateReport, ErrorBoundSummary, ReportKind, Verdict, Violation, WsharpCheck, LISTED_MAX,
};
use super::sweep::Sweep;
use super::{base_report, fmt6, ProblemInstance};

/// Bisection steps used to place a level-set point on a grid edge.
const BISECTION_STEPS: u32 = 60;

fn shifted(e: FuncExpr, by: f64) -> Result<FuncExpr> {
    let dim = e.dim()?;
    Ok(FuncExpr::Sum(vec![e, FuncExpr::affine(&vec![0.0; dim], -by)?]))
}

/// Zero of `phi` on the segment `[a, b]` where `phi(a)` and `phi(b)` have
/// opposite signs.
fn bisect(phi: &FuncExpr, a: &[f64], b: &[f64], fa: f64) -> Option<Vec<f64>> {
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let at = |t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let v = phi.evaluate(&at(mid)).ok()?;
        if (v < 0.0) == (fa < 0.0) && v != 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(at(0.5 * (lo + hi)))
}

/// Checks `tau dist(x, Ω) <= [g(x) - alpha]_+ + |h(x) - beta|` on the grid,
/// where `Ω = {g <= alpha, h = beta}`.
///
/// `Ω` is represented by the grid points whose residual is within the
/// feasibility tolerance together with the points where `g - alpha` or
/// `h - beta` changes sign along a grid edge (located by bisection and kept
/// when their residual is within tolerance). `g` and `h` come from the
/// problem's constraints; without constraints the objective plays the part
/// of `g`. With `tau = None` the largest `tau` valid on the grid is used.
pub fn check_error_bound(p: &ProblemInstance, alpha: f64, beta: f64, tau: Option<f64>) -> Result<CertificateReport> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::NonFinite("error bound levels"));
    }
    if let Some(t) = tau {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidArgument(alloc::format!("tau must be positive, got {t}")));
        }
    }
    let (g, h) = match &p.constraints {
        Some(c) => c.functional(),
        None => (Some(p.objective.clone()), None),
    };
    let mut signed = vec![];
    let mut parts = vec![];
    if let Some(g) = g {
        let e = shifted(g, alpha)?;
        parts.push(e.clone().pos_part());
        signed.push(e);
    }
    if let Some(h) = h {
        let e = shifted(h, beta)?;
        parts.push(e.clone().abs());
        signed.push(e);
    }
    let residual = if parts.len() == 1 { parts.pop().expect("one part") } else { FuncExpr::Sum(parts) };

    let feas = p.tolerances.feas_tol;
    let mut q = p.clone();
    q.objective = residual.clone();
    q.constraints = None;
    q.tolerances.argmin_tol = Some(feas.max(f64::MIN_POSITIVE));
    let s = Sweep::new(&q, false)?;
    let grid = &s.grid;
    let idx = grid.indices();
    let level: Vec<bool> = s.values.iter().map(|&v| v <= feas).collect();

    let signed_vals = signed
        .iter()
        .map(|e| crate::par::map(&idx, |&i| e.evaluate(grid.point(i))).into_iter().collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let crossings = crate::par::map(&idx, |&i| {
        let mut out = Vec::new();
        for j in grid.successors(i) {
            for (e, vals) in signed.iter().zip(&signed_vals) {
                let (a, b) = (vals[i], vals[j]);
                if a * b < 0.0 {
                    if let Some(y) = bisect(e, grid.point(i), grid.point(j), a) {
                        if residual.evaluate(&y).is_ok_and(|r| r <= feas) {
                            out.push(y);
                        }
                    }
                }
            }
        }
        out
    });
    let mut flat = Vec::new();
    let mut listed = Vec::new();
    let mut level_points = 0;
    for (i, &l) in level.iter().enumerate() {
        if l {
            level_points += 1;
            flat.extend_from_slice(grid.point(i));
            if listed.len() < LISTED_MAX {
                listed.push(grid.point(i).to_vec());
            }
        }
    }
    let mut edge_points = 0;
    for y in crossings.into_iter().flatten() {
        edge_points += 1;
        flat.extend_from_slice(&y);
    }
    if flat.is_empty() {
        return Err(Error::Infeasible(alloc::format!(
            "level set {{g <= {alpha}, h = {beta}}} has no point on the grid (smallest residual {})",
            s.inf
        )));
    }
    let near = NearestSet::new(grid.dim(), flat);

    let off: Vec<usize> = (0..grid.len()).filter(|&i| !level[i]).collect();
    let dists = crate::par::map(&off, |&i| near.distance(grid.point(i)));
    let mut tau_hat: Option<(f64, usize)> = None;
    let mut sup_ratio: Option<f64> = None;
    for (&i, &d) in off.iter().zip(&dists) {
        let ratio = s.values[i] / d;
        if tau_hat.is_none_or(|(t, _)| ratio < t) {
            tau_hat = Some((ratio, i));
        }
        sup_ratio = Some(sup_ratio.map_or(ratio, |m| m.max(ratio)));
    }

    let mut r = base_report(&s, ReportKind::ErrorBound);
    r.argmin = ArgminSummary { inf_f_hat: s.inf, tol: feas, count: level_points + edge_points, points: listed };
    let used = tau.or(tau_hat.map(|t| t.0));
    r.error_bound = Some(ErrorBoundSummary {
        alpha,
        beta,
        tau: used.unwrap_or(0.0),
        level_points,
        edge_points,
        tau_hat: tau_hat.map(|t| t.0),
        worst_ratio: tau_hat.map(|(t, _)| if t > 0.0 { 1.0 / t } else { f64::MAX }),
        sup_ratio,
    });
    let Some(t) = used else {
        r.verdict = Verdict::CertifiedEmpirical;
        r.summary = String::from("vacuous: every grid point lies in the level set");
        return Ok(r);
    };
    if tau.is_none() {
        r.notes.push(alloc::format!("no tau given; using the largest value valid on the grid, {}", fmt6(t)));
    }

    let mut violations = Vec::new();
    let mut violation_count = 0;
    for (&i, &d) in off.iter().zip(&dists) {
        let (lhs, rhs) = (t * d, s.values[i]);
        if lhs > rhs + feas {
            violation_count += 1;
            if violations.len() < LISTED_MAX {
                violations.push(Violation { point: grid.point(i).to_vec(), lhs, rhs });
            }
        }
    }
    if violation_count == 0 && t > 0.0 {
        r.verdict = Verdict::CertifiedEmpirical;
        r.summary = alloc::format!("error bound holds with tau = {} at every grid point", fmt6(t));
    } else if violation_count == 0 {
        r.verdict = Verdict::RefutedOnGrid;
        r.summary = String::from("no positive tau is valid on the grid");
    } else {
        r.verdict = Verdict::RefutedOnGrid;
        r.summary = alloc::format!("error bound with tau = {} fails at {violation_count} grid points", fmt6(t));
    }
    r.check = Some(WsharpCheck {
        sigma: t,
        slack: feas,
        violation_count,
        violations,
        sigma_hat: tau_hat.map(|t| t.0),
        sigma_hat_witness: tau_hat.map(|(_, i)| grid.point(i).to_vec()),
        sublevel: Vec::new(),
    });
    Ok(r)
}
