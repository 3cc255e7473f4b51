use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exhauster::LowerExhauster;
use crate::geometry::Vector;
use crate::sampling::{expr_fn, hadamard_lower, Schedule};

use super::cone::capped_cone_distance;
use super::constrained::lipschitz_and_lambda;
use super::problem::{Constraints, HalfSpace};
use super::report::{
    CertificateReport, ExhausterOrigin, ExhausterSummary, Modulus, ReportKind, Verdict, LISTED_MAX,
};
use super::sweep::Sweep;
use super::unconstrained::stride;
use super::{base_report, decide, fmt6, probe, ProblemInstance};

/// Grid points whose exhauster is compared against numerical Hadamard
/// derivatives.
const HADAMARD_POINTS: usize = 128;

/// Stopping tolerance of the capped-cone solver.
const CONE_TOL: f64 = 1e-12;

/// Where lower exhausters of the objective come from.
#[derive(Debug, Clone, PartialEq)]
pub enum ExhausterSource {
    /// Built from the objective expression at each point.
    Symbolic,
    /// One family used at every point, for positively homogeneous objectives.
    Global(LowerExhauster),
    /// Families attached to specific points; points without one are missing.
    PerPoint(Vec<(Vec<f64>, LowerExhauster)>),
}

impl ExhausterSource {
    fn origin(&self) -> ExhausterOrigin {
        match self {
            ExhausterSource::Symbolic => ExhausterOrigin::Symbolic,
            _ => ExhausterOrigin::Supplied,
        }
    }

    pub(crate) fn at(&self, p: &ProblemInstance, x: &[f64]) -> Result<Option<LowerExhauster>> {
        match self {
            ExhausterSource::Symbolic => LowerExhauster::from_expr(&p.objective, x).map(Some),
            ExhausterSource::Global(e) => {
                crate::error::check_dim(x.len(), e.dim())?;
                Ok(Some(e.clone()))
            }
            ExhausterSource::PerPoint(list) => Ok(list
                .iter()
                .find(|(y, _)| {
                    y.len() == x.len() && y.iter().zip(x).all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + b.abs()))
                })
                .map(|(_, e)| e.clone())),
        }
    }

    /// Off-grid evaluation is only possible without a point table.
    fn off_grid(&self) -> bool {
        !matches!(self, ExhausterSource::PerPoint(_))
    }
}

fn modulus_from(s: &Sweep<'_>, idx: &[usize], inner: &[f64], sound: &[f64]) -> Option<Modulus> {
    let b = (0..sound.len()).min_by(|&a, &b| sound[a].total_cmp(&sound[b]).then(a.cmp(&b)))?;
    Some(Modulus {
        sharp_inner: inner.iter().copied().fold(f64::INFINITY, f64::min),
        sound_outer: sound[b],
        representative_outer: None,
        witness: s.grid.point(idx[b]).to_vec(),
    })
}

/// Compares `min_C s(v | C)` with the Hadamard lower derivative along the
/// coordinate directions at a strided subset of points.
fn hadamard_diagnostic(s: &Sweep<'_>, idx: &[usize], fams: &[Option<LowerExhauster>]) -> Result<(usize, usize)> {
    let picks = stride(&(0..idx.len()).collect::<Vec<_>>(), HADAMARD_POINTS);
    let f = expr_fn(&s.p.objective);
    let schedule = Schedule::default();
    let dim = s.grid.dim();
    let per = crate::par::map(&picks, |&k| -> Result<(usize, usize)> {
        let Some(e) = &fams[k] else { return Ok((0, 0)) };
        let x = s.grid.point(idx[k]);
        let (mut checked, mut bad) = (0, 0);
        for axis in 0..dim {
            for sign in [1.0, -1.0] {
                let mut v = alloc::vec![0.0; dim];
                v[axis] = sign;
                let h = hadamard_lower(&f, x, &v, &schedule)?.value;
                if !h.is_finite() {
                    continue;
                }
                checked += 1;
                if (e.eval(&v)? - h).abs() > 1e-4 * (1.0 + h.abs()) {
                    bad += 1;
                }
            }
        }
        Ok((checked, bad))
    });
    let mut out = (0, 0);
    for r in per {
        let (c, b) = r?;
        out.0 += c;
        out.1 += b;
    }
    Ok(out)
}

fn missing_verdict(r: &mut CertificateReport, missing: usize) {
    r.verdict = Verdict::Inconclusive;
    r.summary = alloc::format!("no exhauster supplied at {missing} grid points off the argmin set");
}

/// Nondegeneracy of lower exhausters: `inf ‖E(x)‖ >= tau > 0` over the grid
/// points off the argmin set, then the direct inequality check with
/// `sigma = tau`.
pub fn certify_exhauster(p: &ProblemInstance, source: &ExhausterSource) -> Result<CertificateReport> {
    let s = Sweep::new(p, false)?;
    let mut r = base_report(&s, ReportKind::Exhauster);
    let off = s.off_argmin();
    let fams = crate::par::map(&off, |&i| source.at(p, s.grid.point(i)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut idx = Vec::new();
    let mut norms = Vec::new();
    let mut missing = Vec::new();
    for (k, e) in fams.iter().enumerate() {
        match e {
            Some(e) => {
                idx.push(off[k]);
                norms.push(e.norm()?);
            }
            None => missing.push(s.grid.point(off[k]).to_vec()),
        }
    }
    r.tau = modulus_from(&s, &idx, &norms, &norms);
    let (hadamard_checked, hadamard_mismatches) = hadamard_diagnostic(&s, &off, &fams)?;
    let n_missing = missing.len();
    missing.truncate(LISTED_MAX);
    r.exhauster = Some(ExhausterSummary {
        origin: source.origin(),
        missing,
        hadamard_checked,
        hadamard_mismatches,
        solver_failures: Vec::new(),
    });
    if hadamard_mismatches > 0 {
        r.notes.push(alloc::format!(
            "exhauster disagrees with the numerical Hadamard lower derivative in {hadamard_mismatches} of {hadamard_checked} directions"
        ));
    }
    if n_missing > 0 {
        missing_verdict(&mut r, n_missing);
        r.check = Some(s.check(p.options.sigma.unwrap_or(0.0))?);
        return Ok(r);
    }
    let pr = if source.off_grid() {
        probe(&s, |y| match source.at(p, y)? {
            Some(e) => e.norm().map(Some),
            None => Ok(None),
        })?
    } else {
        None
    };
    let cond = r.tau.as_ref().map(|m| m.sound_outer);
    decide(&s, &mut r, "tau", cond, pr.as_ref())?;
    r.probe = pr;
    Ok(r)
}

/// Outward normals of the rows active at `x`.
pub(crate) fn active_normals(rows: &[HalfSpace], x: &[f64], tie: f64, feas: f64) -> Vec<Vector> {
    rows.iter()
        .filter(|r| r.residual(x).abs() <= f64::max(tie * (1.0 + r.d.abs()), feas))
        .map(|r| r.c.clone())
        .collect()
}

pub(crate) struct ZetaValue {
    pub value: f64,
    pub lower: f64,
    pub converged: bool,
}

pub(crate) fn zeta_at(e: &LowerExhauster, gens: &[Vector], lambda: f64) -> Result<ZetaValue> {
    let mut out = ZetaValue { value: 0.0, lower: 0.0, converged: true };
    for m in e.members() {
        let d = capped_cone_distance(m, gens, lambda, CONE_TOL)?;
        out.value = out.value.max(d.distance);
        out.lower = out.lower.max(d.lower_bound);
        out.converged &= d.converged;
    }
    Ok(out)
}

/// Exhauster certificate over a polyhedron `{<c_i, x> <= d_i}`:
/// `zeta = inf max_{C ∈ E(x)} dist(0, C + lambda (N(x) ∩ B))` over feasible
/// grid points off the argmin set, with `N(x)` generated by the active rows
/// and `lambda` above the Lipschitz rank of the objective.
pub fn certify_constrained_exhauster(p: &ProblemInstance, source: &ExhausterSource) -> Result<CertificateReport> {
    let rows = match &p.constraints {
        Some(Constraints::Polyhedral(rows)) => rows,
        _ => {
            return Err(Error::InvalidArgument(String::from(
                "the constrained exhauster certificate needs polyhedral constraints",
            )))
        }
    };
    let s = Sweep::new(p, true)?;
    let (ell, src, lambda) = lipschitz_and_lambda(&s)?;
    let mut r = base_report(&s, ReportKind::ConstrainedExhauster);
    let (tie, feas) = (p.tolerances.tie_tol, p.tolerances.feas_tol);
    let off = s.off_argmin();
    let fams = crate::par::map(&off, |&i| source.at(p, s.grid.point(i)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let vals = crate::par::map(&off.iter().zip(&fams).collect::<Vec<_>>(), |(&i, e)| -> Result<Option<ZetaValue>> {
        let Some(e) = e else { return Ok(None) };
        let gens = active_normals(rows, s.grid.point(i), tie, feas);
        zeta_at(e, &gens, lambda).map(Some)
    });
    let (mut idx, mut inner, mut sound) = (Vec::new(), Vec::new(), Vec::new());
    let (mut missing, mut failures) = (Vec::new(), Vec::new());
    for (k, v) in vals.into_iter().enumerate() {
        let x = s.grid.point(off[k]).to_vec();
        match v? {
            None => missing.push(x),
            Some(z) if !z.converged => failures.push(x),
            Some(z) => {
                idx.push(off[k]);
                inner.push(z.value);
                sound.push(z.lower);
            }
        }
    }
    r.zeta = modulus_from(&s, &idx, &inner, &sound);
    r.penalty = Some(super::report::PenaltySummary {
        lipschitz: ell,
        lipschitz_source: src,
        lambda,
        case_counts: [0; 8],
        argmin_consistent: true,
    });
    let (hadamard_checked, hadamard_mismatches) = hadamard_diagnostic(&s, &off, &fams)?;
    let (n_missing, n_failed) = (missing.len(), failures.len());
    missing.truncate(LISTED_MAX);
    failures.truncate(LISTED_MAX);
    r.exhauster = Some(ExhausterSummary {
        origin: source.origin(),
        missing,
        hadamard_checked,
        hadamard_mismatches,
        solver_failures: failures,
    });
    if n_missing > 0 || n_failed > 0 {
        r.check = Some(s.check(p.options.sigma.unwrap_or(0.0))?);
        if n_missing > 0 {
            missing_verdict(&mut r, n_missing);
        } else {
            r.verdict = Verdict::Inconclusive;
            r.summary = alloc::format!("the capped-cone solver did not converge at {n_failed} grid points");
        }
        return Ok(r);
    }
    let pr = if source.off_grid() {
        probe(&s, |y| match source.at(p, y)? {
            Some(e) => {
                let z = zeta_at(&e, &active_normals(rows, y, tie, feas), lambda)?;
                Ok(z.converged.then_some(z.lower))
            }
            None => Ok(None),
        })?
    } else {
        None
    };
    let cond = r.zeta.as_ref().map(|m| m.sound_outer);
    decide(&s, &mut r, "zeta", cond, pr.as_ref())?;
    r.probe = pr;
    if let Some(z) = &r.zeta {
        if z.sharp_inner - z.sound_outer > 1e-6 {
            r.notes.push(alloc::format!(
                "solver gap: zeta between {} and {}",
                fmt6(z.sound_outer),
                fmt6(z.sharp_inner)
            ));
        }
    }
    Ok(r)
}
