use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Stated in every report: nothing here is a proof.
pub const DISCLAIMER: &str = "grid-empirical: infima and suprema over the space are replaced by extrema over the sampled box; this is evidence, not a mathematical proof";

/// At most this many argmin points and violations are listed in a report.
pub const LISTED_MAX: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedEmpirical,
    RefutedOnGrid,
    Inconclusive,
}

impl Verdict {
    /// Process exit code for the verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::CertifiedEmpirical => 0,
            Verdict::RefutedOnGrid => 2,
            Verdict::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    /// Direct check of the weak sharpness inequality for a given modulus.
    WsharpCheck,
    /// Nondegeneracy of `Demcoqd f` off the argmin set.
    Quasidifferential,
    /// Exact-penalty certificate for `g <= 0, h = 0`.
    Constrained,
    /// Nondegeneracy of lower exhausters.
    Exhauster,
    /// Exhausters plus capped normal cones of a polyhedron.
    ConstrainedExhauster,
    ErrorBound,
}

/// A grid point where `lhs > rhs + slack`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub point: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub dim: usize,
    pub resolution: usize,
    pub points: usize,
    /// Points satisfying the constraints (all of them when unconstrained).
    pub feasible_points: usize,
    pub bounds: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArgminSummary {
    pub inf_f_hat: f64,
    pub tol: f64,
    pub count: usize,
    /// The first `LISTED_MAX` argmin points in grid order.
    pub points: Vec<Vec<f64>>,
}

/// A condition value as an infimum over grid points. `sharp_inner` uses the
/// computed Demyanov difference (exact in dims 1-2, an inner approximation
/// above); `sound_outer` is a value that never overstates the true one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modulus {
    pub sharp_inner: f64,
    pub sound_outer: f64,
    /// Same infimum over the outer bound `sub + sup` of the calculus
    /// representative; depends on the representative.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative_outer: Option<f64>,
    /// Grid point attaining `sound_outer`.
    pub witness: Vec<f64>,
}

/// Refinement of the condition toward the argmin set from its grid
/// neighbors, by repeated halving of the segment to the nearest argmin point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub points_probed: usize,
    /// Smallest condition value met along the segments.
    pub condition: Option<f64>,
    pub condition_witness: Option<Vec<f64>>,
    /// Smallest `(f - inf f) / dist` met along the segments.
    pub sigma_hat: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SublevelRow {
    pub alpha: f64,
    /// Largest grid distance to the argmin set within `lev_alpha f`.
    pub max_dist: f64,
    /// `(alpha - inf f) / sigma`.
    pub bound: f64,
    pub holds: bool,
}

/// Outcome of checking `sigma dist(x, Argmin) <= f(x) - inf f` on the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WsharpCheck {
    pub sigma: f64,
    pub slack: f64,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    /// Largest modulus valid on the grid; absent when every point is argmin.
    pub sigma_hat: Option<f64>,
    pub sigma_hat_witness: Option<Vec<f64>>,
    pub sublevel: Vec<SublevelRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeCrossCheck {
    pub checked: usize,
    pub failures: usize,
    /// Smallest `slope - inner distance` seen.
    pub worst_margin: f64,
    pub worst_point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothnessFlag {
    pub point: Vec<f64>,
    /// `max_v |f'(x; v) + f'(x; -v)|` over the probe directions.
    pub asymmetry: f64,
    pub looks_differentiable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LipschitzSource {
    Supplied,
    Estimated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltySummary {
    pub lipschitz: f64,
    pub lipschitz_source: LipschitzSource,
    pub lambda: f64,
    /// Number of infeasible grid points per constraint case 1-7; index 0
    /// collects points outside the seven cases.
    pub case_counts: [usize; 8],
    /// Grid argmin of the penalized objective equals the feasible argmin.
    pub argmin_consistent: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExhausterOrigin {
    Symbolic,
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExhausterSummary {
    pub origin: ExhausterOrigin,
    /// Grid points with no exhauster available.
    pub missing: Vec<Vec<f64>>,
    /// Directions where `min_C s(v|C)` was compared to the numerical Hadamard
    /// lower derivative.
    pub hadamard_checked: usize,
    pub hadamard_mismatches: usize,
    /// Points where the conditional-gradient solver stopped early.
    #[serde(default)]
    pub solver_failures: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBoundSummary {
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    /// Grid points of `{g <= alpha, h = beta}`.
    pub level_points: usize,
    /// Level-set points found on grid edges between sign changes.
    pub edge_points: usize,
    /// Largest `tau` valid on the grid, `min residual / dist`.
    pub tau_hat: Option<f64>,
    /// `max dist / residual` over points outside the level set.
    pub worst_ratio: Option<f64>,
    /// `max residual / dist`; never above the true best ratio's supremum.
    pub sup_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub kind: ReportKind,
    pub verdict: Verdict,
    /// One-line reason for the verdict.
    pub summary: String,
    pub disclaimer: String,
    pub seed: u64,
    pub grid: GridSummary,
    /// Which Demyanov backend produced the condition values.
    pub backend: Option<crate::demyanov::Backend>,
    /// A Euclidean ball was replaced by a polytope somewhere.
    pub approx: bool,
    pub argmin: ArgminSummary,
    pub condition_holds: Option<bool>,
    pub tau: Option<Modulus>,
    pub zeta: Option<Modulus>,
    pub probe: Option<Probe>,
    pub check: Option<WsharpCheck>,
    pub slope_check: Option<SlopeCrossCheck>,
    pub smoothness: Vec<SmoothnessFlag>,
    pub penalty: Option<PenaltySummary>,
    pub exhauster: Option<ExhausterSummary>,
    pub error_bound: Option<ErrorBoundSummary>,
    pub notes: Vec<String>,
}

impl CertificateReport {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    /// `tau.sharp_inner`, the headline condition value.
    pub fn tau_sharp(&self) -> Option<f64> {
        self.tau.as_ref().map(|t| t.sharp_inner)
    }

    pub fn tau_sound(&self) -> Option<f64> {
        self.tau.as_ref().map(|t| t.sound_outer)
    }

    pub fn violations(&self) -> &[Violation] {
        self.check.as_ref().map_or(&[], |c| &c.violations)
    }
}
