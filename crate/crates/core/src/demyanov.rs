//! The Demyanov difference `A ⊖ B` of polytopes and the map
//! `Demcoqd f(x) = sub ⊖ (-sup)`.
//!
//! `A ⊖ B` is the convex hull of `a(v) - b(v)` over directions `v` that
//! expose a single vertex `a(v)` of `A` and a single vertex `b(v)` of `B`.
//! In one and two dimensions every such pair is enumerated exactly; above
//! that the pairs come from a sampled direction set and the result is an
//! inner approximation.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{unit_directions, Polytope, Vector, DEFAULT_DIRECTION_COUNT, DEFAULT_SEED};
use crate::qdcalc::{quasidiff, FuncExpr};

/// Relative tolerance of the singleton max-face test in the sampled backend.
pub const TIE_TOL: f64 = 1e-9;

/// Normal-fan breakpoints closer than this (radians) are merged.
pub const ARC_MERGE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Exact1d,
    Exact2d,
    Sampled,
}

impl Backend {
    pub fn is_exact(self) -> bool {
        !matches!(self, Backend::Sampled)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DemyanovResult {
    /// Canonical vertex list of the difference.
    pub set: Polytope,
    pub backend: Backend,
    /// Directions drawn by the sampled backend, 0 otherwise.
    pub sample_count: usize,
    /// Sampled directions dropped because a max-face was not a singleton.
    pub tie_skipped: usize,
    /// An input set was a polytope stand-in for a ball.
    pub approx: bool,
}

/// `A ⊖ B`, exact in dims 1 and 2, sampled (4096 directions) above.
pub fn demyanov_diff(a: &Polytope, b: &Polytope) -> Result<DemyanovResult> {
    check_dim(a.dim(), b.dim())?;
    match a.dim() {
        1 => Ok(exact_1d(a, b)),
        2 => exact_2d(a, b),
        _ => demyanov_diff_sampled(a, b, DEFAULT_DIRECTION_COUNT, DEFAULT_SEED),
    }
}

fn exact_1d(a: &Polytope, b: &Polytope) -> DemyanovResult {
    let hi = a.support_raw(&[1.0]) - b.support_raw(&[1.0]);
    let lo = -a.support_raw(&[-1.0]) + b.support_raw(&[-1.0]);
    let set = Polytope::interval(hi.min(lo), hi.max(lo)).expect("finite supports");
    DemyanovResult { set, backend: Backend::Exact1d, sample_count: 0, tie_skipped: 0, approx: false }
}

/// Outer normal fan of a planar convex polygon: sorted breakpoint angles in
/// `[0, 2π)` and, for each, the vertex exposed just after it (counter-clockwise).
struct Fan {
    angles: Vec<f64>,
    owners: Vec<usize>,
    vertices: Vec<Vector>,
}

const TAU: f64 = 2.0 * core::f64::consts::PI;

fn wrap(theta: f64) -> f64 {
    let t = theta % TAU;
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

impl Fan {
    fn new(p: &Polytope) -> Fan {
        // Canonical 2D hulls are counter-clockwise.
        let vertices = p.canonicalize().vertices().to_vec();
        let m = vertices.len();
        let mut pairs: Vec<(f64, usize)> = Vec::new();
        if m > 1 {
            for i in 0..m {
                let (p0, p1) = (&vertices[i], &vertices[(i + 1) % m]);
                let (dx, dy) = (p1[0] - p0[0], p1[1] - p0[1]);
                // Outer normal of edge i; the vertex after it in angle is p1.
                pairs.push((wrap(libm::atan2(-dx, dy)), (i + 1) % m));
            }
            pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        }
        Fan {
            angles: pairs.iter().map(|p| p.0).collect(),
            owners: pairs.iter().map(|p| p.1).collect(),
            vertices,
        }
    }

    /// Vertex exposed by the direction at angle `theta` (not a breakpoint).
    fn exposed(&self, theta: f64) -> &Vector {
        if self.angles.is_empty() {
            return &self.vertices[0];
        }
        let k = self.angles.partition_point(|&a| a <= theta);
        let idx = if k == 0 { self.owners[self.owners.len() - 1] } else { self.owners[k - 1] };
        &self.vertices[idx]
    }
}

fn exact_2d(a: &Polytope, b: &Polytope) -> Result<DemyanovResult> {
    let fa = Fan::new(a);
    let fb = Fan::new(b);
    let mut breaks: Vec<f64> = fa.angles.iter().chain(&fb.angles).copied().collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|later, earlier| *later - *earlier < ARC_MERGE);
    if breaks.len() > 1 && breaks[0] + TAU - breaks[breaks.len() - 1] < ARC_MERGE {
        breaks.pop();
    }
    let mids: Vec<f64> = match breaks.len() {
        0 => alloc::vec![0.0],
        1 => alloc::vec![wrap(breaks[0] + core::f64::consts::PI)],
        n => (0..n)
            .map(|i| {
                let lo = breaks[i];
                let hi = if i + 1 < n { breaks[i + 1] } else { breaks[0] + TAU };
                wrap(0.5 * (lo + hi))
            })
            .collect(),
    };
    let diffs = mids
        .iter()
        .map(|&t| fa.exposed(t).sub(fb.exposed(t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(DemyanovResult {
        set: Polytope::new(diffs)?.canonicalize(),
        backend: Backend::Exact2d,
        sample_count: 0,
        tie_skipped: 0,
        approx: false,
    })
}

/// `A ⊖ B` from `count` seeded directions in any dimension.
///
/// Directions whose max-face in `A` or `B` has more than one vertex within
/// `1e-9 (1 + |support|)` are skipped and counted. The result is contained
/// in the true difference.
pub fn demyanov_diff_sampled(a: &Polytope, b: &Polytope, count: usize, seed: u64) -> Result<DemyanovResult> {
    check_dim(a.dim(), b.dim())?;
    let a = a.canonicalize();
    let b = b.canonicalize();
    let dirs = unit_directions(a.dim(), count.max(1), seed);
    let picks = crate::par::map(&dirs, |d| {
        let d = d.as_slice();
        let (ia, sa, _) = a.argmax_raw(d, 0.0);
        let (ib, sb, _) = b.argmax_raw(d, 0.0);
        let ta = a.argmax_raw(d, TIE_TOL * (1.0 + sa.abs())).2;
        let tb = b.argmax_raw(d, TIE_TOL * (1.0 + sb.abs())).2;
        if ta > 1 || tb > 1 {
            None
        } else {
            Some((ia, ib))
        }
    });
    let tie_skipped = picks.iter().filter(|p| p.is_none()).count();
    let mut pairs: Vec<(usize, usize)> = picks.into_iter().flatten().collect();
    pairs.sort_unstable();
    pairs.dedup();
    if pairs.is_empty() {
        return Err(Error::Empty("directions with singleton max-faces"));
    }
    let diffs = pairs
        .iter()
        .map(|&(i, j)| a.vertices()[i].sub(&b.vertices()[j]))
        .collect::<Result<Vec<_>>>()?;
    Ok(DemyanovResult {
        set: Polytope::new(diffs)?.canonicalize(),
        backend: Backend::Sampled,
        sample_count: dirs.len(),
        tie_skipped,
        approx: false,
    })
}

/// `Demcoqd e(x) = sub ⊖ (-sup)` for the calculus representative at `x`.
pub fn demcoqd(e: &FuncExpr, x: &[f64]) -> Result<DemyanovResult> {
    let q = quasidiff(e, x)?;
    let mut r = demyanov_diff(&q.sub, &q.sup.neg())?;
    r.approx |= q.approx;
    Ok(r)
}
