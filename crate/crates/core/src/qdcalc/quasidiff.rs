use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::geometry::{unit_directions, Polytope, DEFAULT_DIRECTION_COUNT, DEFAULT_SEED};

/// A representative `(sub, sup)` of a quasidifferential class.
///
/// The directional derivative is `s(v | sub) - s(v | -sup)`. `approx` marks
/// pairs in which a Euclidean ball was replaced by an inscribed polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiDiff {
    pub sub: Polytope,
    pub sup: Polytope,
    pub approx: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(value: f64, tol: f64) -> Sign {
        if value > tol {
            Sign::Positive
        } else if value < -tol {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

impl QuasiDiff {
    pub fn new(sub: Polytope, sup: Polytope) -> Result<Self> {
        check_dim(sub.dim(), sup.dim())?;
        Ok(QuasiDiff { sub, sup, approx: false })
    }

    /// Pair of a differentiable function with gradient `g`.
    pub fn smooth(g: crate::geometry::Vector) -> Self {
        let dim = g.dim();
        QuasiDiff { sub: Polytope::point(g), sup: Polytope::origin(dim), approx: false }
    }

    pub fn zero(dim: usize) -> Self {
        QuasiDiff { sub: Polytope::origin(dim), sup: Polytope::origin(dim), approx: false }
    }

    pub fn dim(&self) -> usize {
        self.sub.dim()
    }

    /// `f'(x; v) = s(v | sub) - s(v | -sup)`.
    pub fn dir_derivative(&self, v: &[f64]) -> Result<f64> {
        check_dim(self.dim(), v.len())?;
        Ok(self.dir_derivative_raw(v))
    }

    pub(crate) fn dir_derivative_raw(&self, v: &[f64]) -> f64 {
        let neg: Vec<f64> = v.iter().map(|c| -c).collect();
        self.sub.support_raw(v) - self.sup.support_raw(&neg)
    }

    /// `-f`: `sub(-f) = -sup(f)`, `sup(-f) = -sub(f)`.
    pub fn neg(&self) -> QuasiDiff {
        QuasiDiff { sub: self.sup.neg(), sup: self.sub.neg(), approx: self.approx }
    }

    pub fn add(&self, other: &QuasiDiff) -> Result<QuasiDiff> {
        Ok(QuasiDiff {
            sub: self.sub.minkowski_sum(&other.sub)?,
            sup: self.sup.minkowski_sum(&other.sup)?,
            approx: self.approx || other.approx,
        })
    }

    pub fn scale(&self, alpha: f64) -> Result<QuasiDiff> {
        if alpha < 0.0 {
            return self.neg().scale(-alpha);
        }
        Ok(QuasiDiff { sub: self.sub.scale(alpha)?, sup: self.sup.scale(alpha)?, approx: self.approx })
    }

    /// Representative-dependent outer bound `sub + sup` of the Demyanov set.
    pub fn outer_bound(&self) -> Result<Polytope> {
        self.sub.minkowski_sum(&self.sup)
    }
}

/// Quasidifferential of a pointwise max of functions that are all active at
/// the point: `sup = sum_i sup_i`, `sub = conv U_i (sub_i - sum_{j != i} sup_j)`.
pub fn qd_max(active: &[QuasiDiff]) -> Result<QuasiDiff> {
    let first = active.first().ok_or(Error::Empty("active branch list"))?;
    if active.len() == 1 {
        return Ok(first.clone());
    }
    let dim = first.dim();
    let mut sup_total = Polytope::origin(dim);
    for q in active {
        check_dim(dim, q.dim())?;
        sup_total = sup_total.minkowski_sum(&q.sup)?;
    }
    let mut pieces = Vec::with_capacity(active.len());
    for (i, q) in active.iter().enumerate() {
        let mut piece = q.sub.clone();
        for (j, other) in active.iter().enumerate() {
            if j != i {
                piece = piece.minkowski_sum(&other.sup.neg())?;
            }
        }
        pieces.push(piece);
    }
    Ok(QuasiDiff {
        sub: Polytope::conv_union(&pieces)?,
        sup: sup_total,
        approx: active.iter().any(|q| q.approx),
    })
}

/// Pointwise min of active branches, as `-max(-f_i)`.
pub fn qd_min(active: &[QuasiDiff]) -> Result<QuasiDiff> {
    let negated: Vec<QuasiDiff> = active.iter().map(QuasiDiff::neg).collect();
    Ok(qd_max(&negated)?.neg())
}

/// Positive part `[g]_+` from the pair of `g` and its value at the point.
///
/// At `g = 0` (within `tol`): `sub = conv(sub_g U -sup_g)`, `sup = sup_g`.
pub fn qd_pospart(qg: &QuasiDiff, g_at_x: f64, tol: f64) -> Result<QuasiDiff> {
    Ok(match Sign::of(g_at_x, tol) {
        Sign::Positive => qg.clone(),
        Sign::Negative => QuasiDiff::zero(qg.dim()),
        Sign::Zero => QuasiDiff {
            sub: Polytope::conv_union(&[qg.sub.clone(), qg.sup.neg()])?,
            sup: qg.sup.clone(),
            approx: qg.approx,
        },
    })
}

/// Absolute value `|h|` from the pair of `h` and its value at the point.
///
/// At `h = 0` (within `tol`): `sub = 2 conv(sub_h U -sup_h)`,
/// `sup = sup_h - sub_h`.
pub fn qd_abs(qh: &QuasiDiff, h_at_x: f64, tol: f64) -> Result<QuasiDiff> {
    Ok(match Sign::of(h_at_x, tol) {
        Sign::Positive => qh.clone(),
        Sign::Negative => qh.neg(),
        Sign::Zero => QuasiDiff {
            sub: Polytope::conv_union(&[qh.sub.clone(), qh.sup.neg()])?.scale(2.0)?,
            sup: qh.sup.minkowski_sum(&qh.sub.neg())?,
            approx: qh.approx,
        },
    })
}

/// Same class test: the directional derivatives agree within `tol` on the
/// fixed direction set.
pub fn qd_equiv(q1: &QuasiDiff, q2: &QuasiDiff, tol: f64) -> Result<bool> {
    check_dim(q1.dim(), q2.dim())?;
    let dirs = unit_directions(q1.dim(), DEFAULT_DIRECTION_COUNT, DEFAULT_SEED);
    Ok(dirs.iter().all(|v| {
        (q1.dir_derivative_raw(v.as_slice()) - q2.dir_derivative_raw(v.as_slice())).abs() <= tol
    }))
}
