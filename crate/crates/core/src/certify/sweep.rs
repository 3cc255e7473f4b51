//! Shared grid state: objective values, feasibility, the argmin set and
//! distances to it.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::par;

use super::grid::{Grid, NearestSet};
use super::problem::{Constraints, ProblemInstance};
use super::report::{ArgminSummary, GridSummary, SublevelRow, Violation, WsharpCheck, LISTED_MAX};

/// Number of `alpha` levels in the sublevel-set check.
const SUBLEVEL_LEVELS: i32 = 21;

pub(crate) struct Sweep<'a> {
    pub p: &'a ProblemInstance,
    pub grid: Grid,
    pub values: Vec<f64>,
    pub feasible: Vec<bool>,
    pub inf: f64,
    pub tol: f64,
    pub is_argmin: Vec<bool>,
    pub argmin: NearestSet,
    /// Distance from each grid point to the argmin set.
    pub dist: Vec<f64>,
}

fn eval_grid(grid: &Grid, what: &str, f: &crate::FuncExpr) -> Result<Vec<f64>> {
    let idx = grid.indices();
    let vals = par::map(&idx, |&i| f.evaluate(grid.point(i)));
    vals.into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.map_err(|e| Error::InvalidArgument(alloc::format!("{what} at {:?}: {e}", grid.point(i))))
        })
        .collect()
}

/// Feasibility mask of the grid under the problem's constraints.
pub(crate) fn feasibility(p: &ProblemInstance, grid: &Grid) -> Result<Vec<bool>> {
    let tol = p.tolerances.feas_tol;
    Ok(match &p.constraints {
        None => alloc::vec![true; grid.len()],
        Some(Constraints::Polyhedral(rows)) => (0..grid.len())
            .map(|i| rows.iter().all(|r| r.residual(grid.point(i)) <= tol))
            .collect(),
        Some(Constraints::Functional { g, h }) => {
            let mut mask = alloc::vec![true; grid.len()];
            if let Some(g) = g {
                for (m, v) in mask.iter_mut().zip(eval_grid(grid, "constraint g", g)?) {
                    *m &= v <= tol;
                }
            }
            if let Some(h) = h {
                for (m, v) in mask.iter_mut().zip(eval_grid(grid, "constraint h", h)?) {
                    *m &= v.abs() <= tol;
                }
            }
            mask
        }
    })
}

impl<'a> Sweep<'a> {
    /// Sweeps the grid. With `constrained` the argmin is taken over feasible
    /// points; otherwise constraints are ignored.
    pub fn new(p: &'a ProblemInstance, constrained: bool) -> Result<Sweep<'a>> {
        p.validate()?;
        let grid = Grid::new(&p.bounds, p.grid_resolution);
        let values = eval_grid(&grid, "objective", &p.objective)?;
        let feasible = if constrained { feasibility(p, &grid)? } else { alloc::vec![true; grid.len()] };
        let inf = values
            .iter()
            .zip(&feasible)
            .filter(|(_, &ok)| ok)
            .map(|(v, _)| *v)
            .fold(f64::INFINITY, f64::min);
        if !inf.is_finite() {
            return Err(Error::Infeasible(String::from("no feasible grid point")));
        }
        let tol = p.tolerances.argmin_tol_for(inf);
        let is_argmin: Vec<bool> = values.iter().zip(&feasible).map(|(v, &ok)| ok && *v <= inf + tol).collect();
        let mut pts = Vec::new();
        for (i, &a) in is_argmin.iter().enumerate() {
            if a {
                pts.extend_from_slice(grid.point(i));
            }
        }
        let argmin = NearestSet::new(grid.dim(), pts);
        let idx = grid.indices();
        let dist = par::map(&idx, |&i| if is_argmin[i] { 0.0 } else { argmin.distance(grid.point(i)) });
        Ok(Sweep { p, grid, values, feasible, inf, tol, is_argmin, argmin, dist })
    }

    pub fn grid_summary(&self) -> GridSummary {
        GridSummary {
            dim: self.grid.dim(),
            resolution: self.grid.resolution(),
            points: self.grid.len(),
            feasible_points: self.feasible.iter().filter(|&&f| f).count(),
            bounds: self.grid.bounds().iter().map(|&(lo, hi)| [lo, hi]).collect(),
        }
    }

    pub fn argmin_summary(&self) -> ArgminSummary {
        ArgminSummary {
            inf_f_hat: self.inf,
            tol: self.tol,
            count: self.argmin.len(),
            points: (0..self.argmin.len().min(LISTED_MAX)).map(|i| self.argmin.point(i).to_vec()).collect(),
        }
    }

    /// Feasible grid points outside the argmin set, in grid order.
    pub fn off_argmin(&self) -> Vec<usize> {
        (0..self.grid.len()).filter(|&i| self.feasible[i] && !self.is_argmin[i]).collect()
    }

    /// Feasible non-argmin points with an argmin grid neighbor.
    pub fn outer_rim(&self) -> Vec<usize> {
        self.off_argmin()
            .into_iter()
            .filter(|&i| self.grid.neighbors(i).iter().any(|&j| self.is_argmin[j]))
            .collect()
    }

    /// Argmin points with a feasible non-argmin grid neighbor.
    pub fn inner_rim(&self) -> Vec<usize> {
        (0..self.grid.len())
            .filter(|&i| self.is_argmin[i])
            .filter(|&i| self.grid.neighbors(i).iter().any(|&j| self.feasible[j] && !self.is_argmin[j]))
            .collect()
    }

    /// Checks `sigma dist(x, Argmin) <= f(x) - inf + slack` on feasible points,
    /// with `slack` the argmin tolerance, together with the sublevel form
    /// `sup { dist(x, Argmin) : f(x) <= alpha } <= (alpha - inf) / sigma`.
    pub fn check(&self, sigma: f64) -> Result<WsharpCheck> {
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidArgument(alloc::format!("sigma must be a nonnegative number, got {sigma}")));
        }
        let slack = self.tol;
        let mut violations = Vec::new();
        let mut violation_count = 0;
        let mut sigma_hat: Option<(f64, usize)> = None;
        for i in self.off_argmin() {
            let gap = self.values[i] - self.inf;
            let d = self.dist[i];
            let lhs = sigma * d;
            if lhs > gap + slack {
                violation_count += 1;
                if violations.len() < LISTED_MAX {
                    violations.push(Violation { point: self.grid.point(i).to_vec(), lhs, rhs: gap });
                }
            }
            let ratio = gap / d;
            if sigma_hat.is_none_or(|(s, _)| ratio < s) {
                sigma_hat = Some((ratio, i));
            }
        }
        Ok(WsharpCheck {
            sigma,
            slack,
            violation_count,
            violations,
            sigma_hat: sigma_hat.map(|s| s.0),
            sigma_hat_witness: sigma_hat.map(|s| self.grid.point(s.1).to_vec()),
            sublevel: self.sublevel(sigma, slack),
        })
    }

    fn sublevel(&self, sigma: f64, slack: f64) -> Vec<SublevelRow> {
        let mut order: Vec<usize> = (0..self.grid.len()).filter(|&i| self.feasible[i]).collect();
        order.sort_by(|&a, &b| self.values[a].total_cmp(&self.values[b]).then(a.cmp(&b)));
        let top = order.last().map_or(self.inf, |&i| self.values[i]);
        let range = top - self.inf;
        if !(range > self.tol) || sigma == 0.0 {
            return Vec::new();
        }
        let mut alphas: Vec<f64> = (0..SUBLEVEL_LEVELS)
            .rev()
            .map(|j| self.inf + range * libm::ldexp(1.0, -j))
            .filter(|a| a - self.inf > self.tol)
            .collect();
        alphas.dedup();
        let mut rows = Vec::with_capacity(alphas.len());
        let mut k = 0;
        let mut max_dist = 0.0_f64;
        for alpha in alphas {
            while k < order.len() && self.values[order[k]] <= alpha {
                max_dist = max_dist.max(self.dist[order[k]]);
                k += 1;
            }
            let bound = (alpha - self.inf) / sigma;
            rows.push(SublevelRow { alpha, max_dist, bound, holds: max_dist <= bound + slack / sigma });
        }
        rows
    }
}
