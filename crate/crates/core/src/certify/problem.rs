use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::Vector;
use crate::qdcalc::FuncExpr;

/// Largest grid accepted, in points.
pub const MAX_GRID_POINTS: usize = 50_000_000;

/// One polyhedral constraint `<c, x> <= d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub c: Vector,
    pub d: f64,
}

impl HalfSpace {
    pub fn new(c: &[f64], d: f64) -> Result<Self> {
        if !d.is_finite() {
            return Err(Error::NonFinite("half-space offset"));
        }
        Ok(HalfSpace { c: Vector::from_slice(c)?, d })
    }

    /// `<c, x> - d`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        crate::linalg::dot(self.c.as_slice(), x) - self.d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constraints {
    /// `g(x) <= 0` and `h(x) = 0`; either part may be absent.
    Functional { g: Option<FuncExpr>, h: Option<FuncExpr> },
    Polyhedral(Vec<HalfSpace>),
}

impl Constraints {
    /// The functional form; a polyhedron becomes `g = max_i (<c_i, x> - d_i)`.
    pub fn functional(&self) -> (Option<FuncExpr>, Option<FuncExpr>) {
        match self {
            Constraints::Functional { g, h } => (g.clone(), h.clone()),
            Constraints::Polyhedral(rows) => {
                let pieces: Vec<FuncExpr> = rows
                    .iter()
                    .map(|r| FuncExpr::Affine { a: r.c.clone(), b: -r.d })
                    .collect();
                let g = if pieces.len() == 1 { pieces.into_iter().next() } else { Some(FuncExpr::Max(pieces)) };
                (g, None)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute band above the grid minimum counted as argmin; `None` means
    /// `1e-6 (1 + |inf f|)`.
    pub argmin_tol: Option<f64>,
    /// Relative band for sign tests and activity of constraints.
    pub tie_tol: f64,
    /// Absolute feasibility tolerance for `g <= 0`, `h = 0` and polyhedra.
    pub feas_tol: f64,
    /// User-supplied Lipschitz rank of the objective.
    pub lipschitz: Option<f64>,
    /// Condition values below this count as vanishing.
    pub vanishing_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { argmin_tol: None, tie_tol: 1e-9, feas_tol: 1e-8, lipschitz: None, vanishing_tol: 1e-3 }
    }
}

impl Tolerances {
    pub fn argmin_tol_for(&self, inf: f64) -> f64 {
        self.argmin_tol.unwrap_or(1e-6 * (1.0 + inf.abs()))
    }
}

/// Command-specific knobs carried by a problem.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Options {
    pub sigma: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub tau: Option<f64>,
    /// Evaluation points for point-wise commands.
    pub points: Vec<Vec<f64>>,
    /// Cap on grid points receiving the strong-slope cross-check.
    pub slope_checks: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub objective: FuncExpr,
    pub constraints: Option<Constraints>,
    /// Per-coordinate `[lo, hi]`.
    pub bounds: Vec<(f64, f64)>,
    pub grid_resolution: usize,
    pub tolerances: Tolerances,
    pub lambda: Option<f64>,
    pub seed: u64,
    pub options: Options,
}

impl ProblemInstance {
    pub fn new(objective: FuncExpr, bounds: Vec<(f64, f64)>, grid_resolution: usize) -> Self {
        ProblemInstance {
            objective,
            constraints: None,
            bounds,
            grid_resolution,
            tolerances: Tolerances::default(),
            lambda: None,
            seed: crate::geometry::DEFAULT_SEED,
            options: Options::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn with_constraints(mut self, c: Constraints) -> Self {
        self.constraints = Some(c);
        self
    }

    /// Checks the invariants: nonempty box, resolution >= 2, consistent dims,
    /// positive tolerances and a grid of manageable size.
    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 {
            return Err(Error::Empty("box"));
        }
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !lo.is_finite() || !hi.is_finite() {
                return Err(Error::NonFinite("box bounds"));
            }
            if !(lo < hi) {
                return Err(Error::InvalidArgument(alloc::format!("box axis {i}: low {lo} is not below high {hi}")));
            }
        }
        if self.grid_resolution < 2 {
            return Err(Error::InvalidArgument(String::from("grid resolution must be at least 2")));
        }
        let mut total: usize = 1;
        for _ in 0..dim {
            total = total.checked_mul(self.grid_resolution).filter(|&t| t <= MAX_GRID_POINTS).ok_or_else(|| {
                Error::InvalidArgument(alloc::format!("grid larger than {MAX_GRID_POINTS} points"))
            })?;
        }
        check_dim(dim, self.objective.dim()?)?;
        match &self.constraints {
            Some(Constraints::Functional { g, h }) => {
                if g.is_none() && h.is_none() {
                    return Err(Error::Empty("constraint functions"));
                }
                for e in g.iter().chain(h.iter()) {
                    check_dim(dim, e.dim()?)?;
                }
            }
            Some(Constraints::Polyhedral(rows)) => {
                if rows.is_empty() {
                    return Err(Error::Empty("polyhedron rows"));
                }
                for r in rows {
                    check_dim(dim, r.c.dim())?;
                }
            }
            None => {}
        }
        let t = &self.tolerances;
        if let Some(a) = t.argmin_tol {
            if !(a > 0.0) || !a.is_finite() {
                return Err(Error::InvalidArgument(alloc::format!("argmin_tol must be positive, got {a}")));
            }
        }
        for (name, v) in [("tie_tol", t.tie_tol), ("feas_tol", t.feas_tol), ("vanishing_tol", t.vanishing_tol)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(alloc::format!("{name} must be a nonnegative number, got {v}")));
            }
        }
        if let Some(l) = t.lipschitz {
            if !(l >= 0.0) || !l.is_finite() {
                return Err(Error::InvalidArgument(alloc::format!("lipschitz must be nonnegative, got {l}")));
            }
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::InvalidArgument(alloc::format!("lambda must be positive, got {l}")));
            }
        }
        for p in &self.options.points {
            check_dim(dim, p.len())?;
        }
        Ok(())
    }
}
