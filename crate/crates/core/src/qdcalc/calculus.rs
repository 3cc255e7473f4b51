use alloc::vec::Vec;

use crate::error::{check_dim, Result};
use crate::geometry::Polytope;

use super::expr::{linear_part, FuncExpr};
use super::quasidiff::{qd_abs, qd_max, qd_min, qd_pospart, QuasiDiff};

/// Relative band for branch activity at max/min nodes and for the sign tests
/// of positive part and absolute value.
pub const ACTIVITY_TOL: f64 = 1e-9;

#[inline]
pub(crate) fn activity_band(reference: f64) -> f64 {
    ACTIVITY_TOL * (1.0 + reference.abs())
}

/// Indices of the branches within the activity band of the extreme value.
pub(crate) fn active_indices(values: &[f64], take_max: bool) -> Vec<usize> {
    let extreme = if take_max {
        values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    } else {
        values.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let band = activity_band(extreme);
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| if take_max { v >= extreme - band } else { v <= extreme + band })
        .map(|(i, _)| i)
        .collect()
}

/// Textbook representative of the quasidifferential of `e` at `x`.
pub fn quasidiff(e: &FuncExpr, x: &[f64]) -> Result<QuasiDiff> {
    check_dim(e.dim()?, x.len())?;
    Ok(value_and_qd(e, x)?.1)
}

pub(crate) fn value_and_qd(e: &FuncExpr, x: &[f64]) -> Result<(f64, QuasiDiff)> {
    if let Some(g) = e.smooth_gradient(x) {
        let g = g?;
        return Ok((e.evaluate(x)?, QuasiDiff::smooth(g)));
    }
    Ok(match e {
        FuncExpr::Norm2 { center } => {
            check_dim(center.dim(), x.len())?;
            let diff: Vec<f64> = x.iter().zip(center.as_slice()).map(|(a, c)| a - c).collect();
            let r = crate::linalg::norm(&diff);
            if r > 0.0 {
                let g = crate::geometry::Vector::new(diff.iter().map(|d| d / r).collect())?;
                (r, QuasiDiff::smooth(g))
            } else {
                let (ball, approx) = Polytope::unit_ball_standin(x.len());
                (0.0, QuasiDiff { sub: ball, sup: Polytope::origin(x.len()), approx })
            }
        }
        FuncExpr::Piecewise { a, b, below, above } => {
            let s = linear_part(a, *b, x)?;
            if s.abs() <= activity_band(*b) {
                piecewise_on_switch(a.as_slice(), s, below, above, x)?
            } else if s <= 0.0 {
                value_and_qd(below, x)?
            } else {
                value_and_qd(above, x)?
            }
        }
        FuncExpr::Sum(xs) => {
            let mut value = 0.0;
            let mut acc = QuasiDiff::zero(x.len());
            for child in xs {
                let (v, q) = value_and_qd(child, x)?;
                value += v;
                acc = acc.add(&q)?;
            }
            (value, acc)
        }
        FuncExpr::Scale(alpha, child) => {
            let (v, q) = value_and_qd(child, x)?;
            (alpha * v, q.scale(*alpha)?)
        }
        FuncExpr::Neg(child) => {
            let (v, q) = value_and_qd(child, x)?;
            (-v, q.neg())
        }
        FuncExpr::Max(xs) | FuncExpr::Min(xs) => {
            let take_max = matches!(e, FuncExpr::Max(_));
            let evaluated = xs.iter().map(|c| value_and_qd(c, x)).collect::<Result<Vec<_>>>()?;
            let values: Vec<f64> = evaluated.iter().map(|(v, _)| *v).collect();
            let active = active_indices(&values, take_max);
            let qs: Vec<QuasiDiff> = active.iter().map(|&i| evaluated[i].1.clone()).collect();
            let value = if take_max {
                values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            } else {
                values.iter().copied().fold(f64::INFINITY, f64::min)
            };
            (value, if take_max { qd_max(&qs)? } else { qd_min(&qs)? })
        }
        FuncExpr::PosPart(child) => {
            let (v, q) = value_and_qd(child, x)?;
            (v.max(0.0), qd_pospart(&q, v, activity_band(0.0))?)
        }
        FuncExpr::Abs(child) => {
            let (v, q) = value_and_qd(child, x)?;
            (v.abs(), qd_abs(&q, v, activity_band(0.0))?)
        }
        FuncExpr::Affine { .. } | FuncExpr::Poly(_) | FuncExpr::InvAffine { .. } => {
            unreachable!("smooth atoms handled above")
        }
    })
}

/// Directions tested when deciding how two pieces cross a hyperplane.
const CROSSING_DIRECTIONS: usize = 64;

/// Pair of a piecewise expression on its switching hyperplane.
///
/// When both pieces are defined and agree at `x`, and the derivative of
/// `above - below` is nonnegative on the `above` side and nonpositive on the
/// other (checked on `±a` and a fixed direction set), the expression is the
/// max of its pieces near `x`; with the signs reversed it is the min. In every
/// other case, including a jump, the pair of the side selected by evaluation
/// is returned.
fn piecewise_on_switch(a: &[f64], s: f64, below: &FuncExpr, above: &FuncExpr, x: &[f64]) -> Result<(f64, QuasiDiff)> {
    let chosen = if s <= 0.0 { below } else { above };
    let fallback = || value_and_qd(chosen, x);
    let (Ok((vb, qb)), Ok((va, qa))) = (value_and_qd(below, x), value_and_qd(above, x)) else {
        return fallback();
    };
    if (va - vb).abs() > activity_band(vb) {
        return fallback();
    }
    let mut dirs: Vec<Vec<f64>> = alloc::vec![a.to_vec(), a.iter().map(|c| -c).collect()];
    dirs.extend(
        crate::geometry::unit_directions(x.len(), CROSSING_DIRECTIONS, crate::geometry::DEFAULT_SEED)
            .into_iter()
            .map(|v| v.into_inner()),
    );
    let (mut as_max, mut as_min) = (true, true);
    for v in &dirs {
        let g = crate::linalg::dot(a, v);
        if g.abs() <= 1e-12 {
            continue;
        }
        let d = (qa.dir_derivative(v)? - qb.dir_derivative(v)?) * g.signum();
        let tol = activity_band(d);
        as_max &= d >= -tol;
        as_min &= d <= tol;
    }
    let value = if s <= 0.0 { vb } else { va };
    match (as_max, as_min) {
        (true, true) => Ok((value, qb)),
        (true, false) => Ok((value, qd_max(&[qb, qa])?)),
        (false, true) => Ok((value, qd_min(&[qb, qa])?)),
        (false, false) => fallback(),
    }
}
