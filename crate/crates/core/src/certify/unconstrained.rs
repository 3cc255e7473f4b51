use alloc::string::String;
use alloc::vec::Vec;

use crate::demyanov::{demyanov_diff, Backend};
use crate::error::{Error, Result};
use crate::geometry::MIN_NORM_TOL;
use crate::qdcalc::{quasidiff, FuncExpr};
use crate::sampling::{expr_fn, strong_slope, Estimate, Schedule};

use super::report::{
    ArgminSummary, CertificateReport, Modulus, ReportKind, SlopeCrossCheck, SmoothnessFlag, Verdict, WsharpCheck,
    LISTED_MAX,
};
use super::sweep::Sweep;
use super::{base_report, decide, fmt6, probe, ProblemInstance, SLOPE_MARGIN};

/// Default cap on grid points that receive the strong-slope cross-check.
pub const DEFAULT_SLOPE_CHECKS: usize = 4096;

/// Grid minimum of the objective and the points within the argmin band.
pub fn detect_argmin(p: &ProblemInstance) -> Result<ArgminSummary> {
    Ok(Sweep::new(p, false)?.argmin_summary())
}

/// Checks `sigma dist(x, Argmin) <= f(x) - inf f` at every grid point.
pub fn verify_wsharp_inequality(p: &ProblemInstance, sigma: f64) -> Result<WsharpCheck> {
    Sweep::new(p, false)?.check(sigma)
}

/// Direct check of the weak sharpness inequality with a given modulus.
pub fn wsharp_check(p: &ProblemInstance, sigma: f64) -> Result<CertificateReport> {
    let s = Sweep::new(p, false)?;
    let mut r = base_report(&s, ReportKind::WsharpCheck);
    let check = s.check(sigma)?;
    if check.violation_count == 0 {
        r.verdict = Verdict::CertifiedEmpirical;
        r.summary = alloc::format!("inequality holds with sigma = {} at every grid point", fmt6(sigma));
    } else {
        r.verdict = Verdict::RefutedOnGrid;
        r.summary = alloc::format!("inequality with sigma = {} fails at {} grid points", fmt6(sigma), check.violation_count);
    }
    if let Some(bad) = check.sublevel.iter().find(|row| !row.holds) {
        r.notes.push(alloc::format!("sublevel form fails first at alpha = {}", fmt6(bad.alpha)));
    }
    r.check = Some(check);
    Ok(r)
}

/// Strong slope of an expression at `x`.
pub fn strong_slope_estimate(f: &FuncExpr, x: &[f64], schedule: &Schedule) -> Result<Estimate> {
    crate::error::check_dim(f.dim()?, x.len())?;
    strong_slope(&expr_fn(f), x, schedule)
}

/// Distances from the origin to `Demcoqd f(x)` and to the outer bound of the
/// calculus representative.
#[derive(Debug, Clone, Copy)]
pub(crate) struct QdCondition {
    pub inner: f64,
    pub outer: f64,
    pub backend: Backend,
    pub approx: bool,
}

impl QdCondition {
    /// Never above the true distance: the inner value when exact, the outer
    /// bound otherwise.
    pub fn sound(&self) -> f64 {
        if self.backend.is_exact() {
            self.inner
        } else {
            self.outer
        }
    }
}

pub(crate) fn qd_condition(f: &FuncExpr, x: &[f64]) -> Result<QdCondition> {
    let q = quasidiff(f, x)?;
    let d = demyanov_diff(&q.sub, &q.sup.neg())?;
    let inner = d.set.min_norm_point(MIN_NORM_TOL)?.distance;
    let outer = q.outer_bound()?.min_norm_point(MIN_NORM_TOL)?.distance;
    Ok(QdCondition { inner, outer, backend: d.backend, approx: q.approx })
}

/// Infimum over the listed grid points of a per-point condition.
pub(crate) fn modulus_over(s: &Sweep<'_>, idx: &[usize], vals: &[QdCondition]) -> Option<Modulus> {
    let mut best: Option<usize> = None;
    let (mut inner, mut outer) = (f64::INFINITY, f64::INFINITY);
    for (k, c) in vals.iter().enumerate() {
        inner = inner.min(c.inner);
        outer = outer.min(c.outer);
        if best.is_none_or(|b| c.sound() < vals[b].sound()) {
            best = Some(k);
        }
    }
    best.map(|b| Modulus {
        sharp_inner: inner,
        sound_outer: vals[b].sound(),
        representative_outer: Some(outer),
        witness: s.grid.point(idx[b]).to_vec(),
    })
}

/// Evenly strided subset of at most `cap` entries.
pub(crate) fn stride<T: Copy>(items: &[T], cap: usize) -> Vec<T> {
    if items.len() <= cap || cap == 0 {
        return items.to_vec();
    }
    let step = items.len().div_ceil(cap);
    items.iter().step_by(step).copied().collect()
}

/// Nondegeneracy certificate: `dist(0, Demcoqd f(x)) >= tau > 0` off the
/// argmin set, followed by the direct inequality check with `sigma = tau`.
pub fn certify_qd(p: &ProblemInstance) -> Result<CertificateReport> {
    let s = Sweep::new(p, false)?;
    let mut r = base_report(&s, ReportKind::Quasidifferential);
    let f = &p.objective;
    let off = s.off_argmin();
    let conds: Vec<QdCondition> =
        crate::par::map(&off, |&i| qd_condition(f, s.grid.point(i))).into_iter().collect::<Result<_>>()?;
    r.tau = modulus_over(&s, &off, &conds);
    r.backend = Some(conds.first().map_or_else(|| default_backend(p.dim()), |c| c.backend));
    r.approx = conds.iter().any(|c| c.approx);

    let pr = probe(&s, |y| Ok(Some(qd_condition(f, y)?.sound())))?;
    let cond = r.tau.as_ref().map(|m| m.sound_outer);
    decide(&s, &mut r, "tau", cond, pr.as_ref())?;
    r.probe = pr;

    r.slope_check = slope_cross_check(&s, &off, &conds)?;
    if let Some(sc) = &r.slope_check {
        if sc.failures > 0 {
            r.notes.push(alloc::format!(
                "strong slope fell below the condition value by more than {SLOPE_MARGIN} at {} of {} checked points",
                sc.failures,
                sc.checked
            ));
        }
    }
    r.smoothness = smoothness_flags(&s);
    let flagged = r.smoothness.iter().filter(|f| f.looks_differentiable).count();
    if flagged > 0 && r.condition_holds == Some(true) {
        r.notes.push(alloc::format!(
            "{flagged} boundary argmin points look differentiable; with a nondegenerate Demcoqd none should"
        ));
    }
    Ok(r)
}

pub(crate) fn default_backend(dim: usize) -> Backend {
    match dim {
        1 => Backend::Exact1d,
        2 => Backend::Exact2d,
        _ => Backend::Sampled,
    }
}

fn slope_cross_check(s: &Sweep<'_>, off: &[usize], conds: &[QdCondition]) -> Result<Option<SlopeCrossCheck>> {
    let cap = s.p.options.slope_checks.unwrap_or(DEFAULT_SLOPE_CHECKS);
    let picks = stride(&(0..off.len()).collect::<Vec<_>>(), cap);
    if picks.is_empty() {
        return Ok(None);
    }
    let f = expr_fn(&s.p.objective);
    let schedule = Schedule::default();
    let margins = crate::par::map(&picks, |&k| {
        strong_slope(&f, s.grid.point(off[k]), &schedule).map(|e| e.value - conds[k].inner)
    });
    let mut out = SlopeCrossCheck { checked: picks.len(), failures: 0, worst_margin: f64::INFINITY, worst_point: Vec::new() };
    for (m, &k) in margins.into_iter().zip(&picks) {
        let m = m?;
        if m < -SLOPE_MARGIN {
            out.failures += 1;
        }
        if m < out.worst_margin {
            out.worst_margin = m;
            out.worst_point = s.grid.point(off[k]).to_vec();
        }
    }
    if !out.worst_margin.is_finite() {
        // Every checked slope blew up; report the margin as large.
        out.worst_margin = f64::MAX;
    }
    Ok(Some(out))
}

/// Richardson-extrapolated one-sided derivative from steps `1e-4` and `1e-5`.
fn one_sided(f: &FuncExpr, x: &[f64], v: &[f64], fx: f64) -> f64 {
    let (t1, t2) = (1e-4, 1e-5);
    let q = |t: f64| {
        let y: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + t * b).collect();
        (f.evaluate(&y).unwrap_or(f64::NAN) - fx) / t
    };
    (t1 * q(t2) - t2 * q(t1)) / (t1 - t2)
}

fn smoothness_flags(s: &Sweep<'_>) -> Vec<SmoothnessFlag> {
    let f = &s.p.objective;
    let dim = s.grid.dim();
    let rim = s.inner_rim();
    let rim = stride(&rim, LISTED_MAX);
    crate::par::map(&rim, |&i| {
        let x = s.grid.point(i);
        let fx = s.values[i];
        let mut asym = 0.0_f64;
        let mut scale = 0.0_f64;
        for k in 0..dim {
            let mut v = alloc::vec![0.0; dim];
            v[k] = 1.0;
            let plus = one_sided(f, x, &v, fx);
            v[k] = -1.0;
            let minus = one_sided(f, x, &v, fx);
            let a = (plus + minus).abs();
            asym = if a.is_nan() { f64::INFINITY } else { asym.max(a) };
            scale = scale.max(plus.abs()).max(minus.abs());
        }
        let looks_differentiable = asym <= 1e-4 * (1.0 + scale);
        SmoothnessFlag {
            point: x.to_vec(),
            asymmetry: if asym.is_finite() { asym } else { f64::MAX },
            looks_differentiable,
        }
    })
}

/// Linearity test `f'(x; v) + f'(x; -v) = 0` at the argmin points bordering
/// the rest of the grid. Points that pass look differentiable, which a
/// nondegenerate certificate rules out.
pub fn smoothness_probe(p: &ProblemInstance, report: &CertificateReport) -> Result<Vec<SmoothnessFlag>> {
    let s = Sweep::new(p, false)?;
    if (s.inf - report.argmin.inf_f_hat).abs() > s.tol {
        return Err(Error::InvalidArgument(String::from("report was produced for a different problem")));
    }
    Ok(smoothness_flags(&s))
}
