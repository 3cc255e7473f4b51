use alloc::string::String;
use alloc::vec::Vec;

use crate::demyanov::demyanov_diff;
use crate::error::{Error, Result};
use crate::geometry::{Polytope, MIN_NORM_TOL};
use crate::qdcalc::{quasidiff, FuncExpr};

use super::grid::Grid;
use super::penalty::penalty_demcoqd;
use super::report::{CertificateReport, LipschitzSource, Modulus, PenaltySummary, ReportKind};
use super::sweep::Sweep;
use super::{base_report, decide, fmt6, ProblemInstance};

/// Above this many grid points the Lipschitz estimate only uses neighbors.
pub const ALL_PAIRS_MAX: usize = 4096;

/// Largest difference quotient `|f(x) - f(y)| / |x - y|` over grid pairs:
/// all pairs on small grids, the `3^n - 1` neighbors otherwise.
pub fn estimate_lipschitz(p: &ProblemInstance) -> Result<f64> {
    let s = Sweep::new(p, false)?;
    Ok(lipschitz_on(&s.grid, &s.values))
}

fn lipschitz_on(grid: &Grid, values: &[f64]) -> f64 {
    let n = grid.len();
    let idx = grid.indices();
    let per_point = crate::par::map(&idx, |&i| {
        let others: Vec<usize> = if n <= ALL_PAIRS_MAX { (i + 1..n).collect() } else { grid.neighbors(i) };
        let x = grid.point(i);
        others
            .into_iter()
            .map(|j| {
                let y = grid.point(j);
                let d = libm::sqrt(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum());
                (values[i] - values[j]).abs() / d
            })
            .fold(0.0, f64::max)
    });
    per_point.into_iter().fold(0.0, f64::max)
}

pub(crate) fn lipschitz_and_lambda(s: &Sweep<'_>) -> Result<(f64, LipschitzSource, f64)> {
    let (ell, src) = match s.p.tolerances.lipschitz {
        Some(l) => (l, LipschitzSource::Supplied),
        None => (lipschitz_on(&s.grid, &s.values), LipschitzSource::Estimated),
    };
    let lambda = s.p.lambda.unwrap_or(if ell > 0.0 { 2.0 * ell } else { 1.0 });
    if !(lambda > ell) {
        return Err(Error::InvalidArgument(alloc::format!(
            "lambda = {lambda} must exceed the Lipschitz rank {ell} ({})",
            match src {
                LipschitzSource::Supplied => "supplied",
                LipschitzSource::Estimated => "estimated on the grid",
            }
        )));
    }
    Ok((ell, src, lambda))
}

pub(crate) struct PointValue {
    inner: f64,
    outer: f64,
    exact: bool,
    approx: bool,
}

impl PointValue {
    pub(crate) fn sound(&self) -> f64 {
        if self.exact {
            self.inner
        } else {
            self.outer
        }
    }
}

fn modulus(s: &Sweep<'_>, idx: &[usize], vals: &[PointValue]) -> Option<Modulus> {
    let b = (0..vals.len()).min_by(|&a, &b| vals[a].sound().total_cmp(&vals[b].sound()).then(a.cmp(&b)))?;
    Some(Modulus {
        sharp_inner: vals.iter().map(|v| v.inner).fold(f64::INFINITY, f64::min),
        sound_outer: vals[b].sound(),
        representative_outer: Some(vals.iter().map(|v| v.outer).fold(f64::INFINITY, f64::min)),
        witness: s.grid.point(idx[b]).to_vec(),
    })
}

/// Exact-penalty certificate for `min f` subject to `g <= 0`, `h = 0`.
///
/// `tau` is the infimum over infeasible grid points of
/// `dist(0, Demcoqd [g]_+ + Demcoqd |h|)`, `zeta` the infimum over grid
/// points outside the feasible argmin of
/// `dist(0, Demcoqd f + (lambda / tau) (Demcoqd [g]_+ + Demcoqd |h|))`, and the
/// weak sharpness inequality is then checked on the feasible grid with
/// `sigma = zeta`. A polyhedron is handled as `g = max_i (<c_i, x> - d_i)`.
pub fn certify_constrained(p: &ProblemInstance) -> Result<CertificateReport> {
    let (g, h) = p
        .constraints
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(String::from("constrained certificate needs constraints")))?
        .functional();
    let s = Sweep::new(p, true)?;
    let (ell, src, lambda) = lipschitz_and_lambda(&s)?;
    let mut r = base_report(&s, ReportKind::Constrained);
    let tie = p.tolerances.tie_tol;
    let (g, h) = (g.as_ref(), h.as_ref());
    let n = s.grid.len();

    let infeasible: Vec<usize> = (0..n).filter(|&i| !s.feasible[i]).collect();
    let pens = crate::par::map(&infeasible, |&i| penalty_demcoqd(g, h, s.grid.point(i), tie))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut case_counts = [0usize; 8];
    for pd in &pens {
        case_counts[pd.case.map_or(0, usize::from)] += 1;
    }
    let tau_vals = pens
        .iter()
        .map(|pd| {
            Ok(PointValue {
                inner: pd.set.min_norm_point(MIN_NORM_TOL)?.distance,
                outer: pd.outer.min_norm_point(MIN_NORM_TOL)?.distance,
                exact: pd.backend.is_exact(),
                approx: pd.approx,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    r.tau = modulus(&s, &infeasible, &tau_vals);
    let tau = match &r.tau {
        Some(t) => t.sound_outer,
        None => {
            r.notes.push(String::from("no infeasible grid point: tau is vacuous and taken as 1 in the zeta condition"));
            1.0
        }
    };

    let off: Vec<usize> = (0..n).filter(|&i| !s.is_argmin[i]).collect();
    let zeta_vals = if tau > 0.0 {
        let weight = lambda / tau;
        crate::par::map(&off, |&i| zeta_point(&p.objective, g, h, s.grid.point(i), weight, tie))
            .into_iter()
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    r.zeta = modulus(&s, &off, &zeta_vals);
    r.approx = tau_vals.iter().chain(&zeta_vals).any(|v| v.approx);
    r.backend = Some(super::unconstrained::default_backend(p.dim()));

    let argmin_consistent = penalty_consistency(&s, g, h, lambda / tau.max(f64::MIN_POSITIVE))?;
    r.penalty = Some(PenaltySummary { lipschitz: ell, lipschitz_source: src, lambda, case_counts, argmin_consistent });
    if !argmin_consistent {
        r.notes.push(String::from("grid argmin of the penalized objective differs from the feasible grid argmin"));
    }

    let vt = p.tolerances.vanishing_tol;
    if r.tau.is_some() && tau < vt {
        decide(&s, &mut r, "tau", Some(tau), None)?;
        r.summary = alloc::format!("penalty condition fails (tau = {}): {}", fmt6(tau), r.summary);
    } else {
        let zeta = r.zeta.as_ref().map(|z| z.sound_outer);
        decide(&s, &mut r, "zeta", zeta, None)?;
    }
    Ok(r)
}

pub(crate) fn zeta_point(
    f: &FuncExpr,
    g: Option<&FuncExpr>,
    h: Option<&FuncExpr>,
    x: &[f64],
    weight: f64,
    tie: f64,
) -> Result<PointValue> {
    let q = quasidiff(f, x)?;
    let d = demyanov_diff(&q.sub, &q.sup.neg())?;
    let pen = penalty_demcoqd(g, h, x, tie)?;
    let inner_set: Polytope = d.set.minkowski_sum(&pen.set.scale(weight)?)?;
    let outer_set: Polytope = q.outer_bound()?.minkowski_sum(&pen.outer.scale(weight)?)?;
    Ok(PointValue {
        inner: inner_set.min_norm_point(MIN_NORM_TOL)?.distance,
        outer: outer_set.min_norm_point(MIN_NORM_TOL)?.distance,
        exact: d.backend.is_exact() && pen.backend.is_exact(),
        approx: q.approx || pen.approx,
    })
}

/// Grid argmin of `f + w ([g]_+ + |h|)` over the whole box against the
/// feasible grid argmin.
fn penalty_consistency(s: &Sweep<'_>, g: Option<&FuncExpr>, h: Option<&FuncExpr>, w: f64) -> Result<bool> {
    let idx = s.grid.indices();
    let pen = crate::par::map(&idx, |&i| -> Result<f64> {
        let x = s.grid.point(i);
        let gp = g.map_or(Ok(0.0), |g| g.evaluate(x).map(|v| v.max(0.0)))?;
        let ha = h.map_or(Ok(0.0), |h| h.evaluate(x).map(f64::abs))?;
        Ok(s.values[i] + w * (gp + ha))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let inf = pen.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = s.p.tolerances.argmin_tol_for(inf);
    Ok(pen.iter().zip(&s.is_argmin).all(|(v, &a)| (*v <= inf + tol) == a))
}
