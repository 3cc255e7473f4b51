//! Quasidifferential calculus over [`FuncExpr`] trees.
//!
//! A quasidifferential at a point is stored as one representative pair
//! `(sub, sup)`; the calculus returns the textbook representative and makes
//! no attempt to shrink it.

mod calculus;
mod expr;
mod quasidiff;

pub use calculus::{quasidiff, ACTIVITY_TOL};
pub use expr::{FuncExpr, Monomial, Polynomial};
pub use quasidiff::{qd_abs, qd_equiv, qd_max, qd_min, qd_pospart, QuasiDiff, Sign};

pub(crate) use calculus::{active_indices, value_and_qd};

/// `f'(x; v)` from a quasidifferential pair.
pub fn dir_derivative(q: &QuasiDiff, v: &[f64]) -> crate::Result<f64> {
    q.dir_derivative(v)
}
