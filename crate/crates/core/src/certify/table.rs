//! Per-point dump of a certificate run for external plotting.

use alloc::vec::Vec;

use crate::error::{Error, Result};

use super::constrained::{lipschitz_and_lambda, zeta_point};
use super::exhaust::{active_normals, zeta_at, ExhausterSource};
use super::problem::Constraints;
use super::report::{CertificateReport, ReportKind};
use super::sweep::Sweep;
use super::unconstrained::qd_condition;
use super::ProblemInstance;

/// One grid point of a [`grid_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub point: Vec<f64>,
    pub value: f64,
    /// Distance to the (feasible) grid argmin set.
    pub dist: f64,
    /// Per-point condition value of the report's certificate, where defined.
    pub condition: Option<f64>,
}

/// Recomputes, point by point, the quantity whose grid infimum the report
/// states:
///
/// - `WsharpCheck`: `(f(x) - inf f) / dist(x, Argmin)`;
/// - `Quasidifferential`: the sound distance `dist(0, Demcoqd f(x))`;
/// - `Constrained`: the sound `zeta` value at `x`;
/// - `Exhauster`: `‖E(x)‖`;
/// - `ConstrainedExhauster`: the sound `zeta` value at feasible `x`;
/// - `ErrorBound`: none.
///
/// Argmin points carry no condition value. `source` is required for the two
/// exhauster kinds.
pub fn grid_table(
    p: &ProblemInstance,
    report: &CertificateReport,
    source: Option<&ExhausterSource>,
) -> Result<Vec<GridRow>> {
    let kind = report.kind;
    let constrained = matches!(kind, ReportKind::Constrained | ReportKind::ConstrainedExhauster);
    let s = Sweep::new(p, constrained)?;
    let need_source = || {
        source.ok_or_else(|| Error::InvalidArgument(alloc::string::String::from("exhauster table needs a source")))
    };
    let idx = s.grid.indices();
    let cond: Vec<Result<Option<f64>>> = match kind {
        ReportKind::ErrorBound => idx.iter().map(|_| Ok(None)).collect(),
        ReportKind::WsharpCheck => idx
            .iter()
            .map(|&i| Ok((!s.is_argmin[i] && s.feasible[i]).then(|| (s.values[i] - s.inf) / s.dist[i])))
            .collect(),
        ReportKind::Quasidifferential => crate::par::map(&idx, |&i| {
            if s.is_argmin[i] {
                return Ok(None);
            }
            qd_condition(&p.objective, s.grid.point(i)).map(|c| Some(c.sound()))
        }),
        ReportKind::Constrained => {
            let (g, h) = p
                .constraints
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument(alloc::string::String::from("no constraints")))?
                .functional();
            let (_, _, lambda) = lipschitz_and_lambda(&s)?;
            let tau = report.tau.as_ref().map_or(1.0, |t| t.sound_outer);
            if !(tau > 0.0) {
                idx.iter().map(|_| Ok(None)).collect()
            } else {
                let tie = p.tolerances.tie_tol;
                crate::par::map(&idx, |&i| {
                    if s.is_argmin[i] {
                        return Ok(None);
                    }
                    zeta_point(&p.objective, g.as_ref(), h.as_ref(), s.grid.point(i), lambda / tau, tie)
                        .map(|v| Some(v.sound()))
                })
            }
        }
        ReportKind::Exhauster => {
            let src = need_source()?;
            crate::par::map(&idx, |&i| {
                if s.is_argmin[i] {
                    return Ok(None);
                }
                match src.at(p, s.grid.point(i))? {
                    Some(e) => e.norm().map(Some),
                    None => Ok(None),
                }
            })
        }
        ReportKind::ConstrainedExhauster => {
            let src = need_source()?;
            let Some(Constraints::Polyhedral(rows)) = &p.constraints else {
                return Err(Error::InvalidArgument(alloc::string::String::from("needs polyhedral constraints")));
            };
            let (_, _, lambda) = lipschitz_and_lambda(&s)?;
            let (tie, feas) = (p.tolerances.tie_tol, p.tolerances.feas_tol);
            crate::par::map(&idx, |&i| {
                if s.is_argmin[i] || !s.feasible[i] {
                    return Ok(None);
                }
                let x = s.grid.point(i);
                match src.at(p, x)? {
                    Some(e) => {
                        let z = zeta_at(&e, &active_normals(rows, x, tie, feas), lambda)?;
                        Ok(z.converged.then_some(z.lower))
                    }
                    None => Ok(None),
                }
            })
        }
    };
    idx.iter()
        .zip(cond)
        .map(|(&i, c)| {
            Ok(GridRow { point: s.grid.point(i).to_vec(), value: s.values[i], dist: s.dist[i], condition: c? })
        })
        .collect()
}
