//! Nonsmooth analysis kernel for weak sharp minimality.
//!
//! The crate works over `R^n` with the Euclidean norm and stores every
//! convex compact set as a finite vertex list. On top of that it provides
//! quasidifferential calculus for a small expression language, the Demyanov
//! difference, lower exhausters, and grid-empirical certificates of global
//! weak sharp minimality.
//!
//! Everything here is `no_std` compatible (with `alloc`). The `parallel`
//! feature fans grid sweeps out over rayon; reductions stay sequential so
//! results do not depend on the thread count.

#![cfg_attr(not(feature = "std"), no_std)]
// `!(a > b)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod certify;
pub mod demyanov;
pub mod error;
pub mod exhauster;
pub mod geometry;
pub mod qdcalc;
pub mod sampling;

mod linalg;
mod par;

pub use error::{Error, Result};
pub use geometry::{set_compare, Comparison, Polytope, Relation, Vector};
pub use qdcalc::{FuncExpr, QuasiDiff};
