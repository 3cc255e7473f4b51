//! Convex polytopes in V-representation and the operations the rest of the
//! crate builds on: support values, max-faces, Minkowski arithmetic, hulls,
//! set comparison and the min-norm point.

mod compare;
pub mod directions;
mod hull;
mod minnorm;
mod polytope;
mod vector;

pub use compare::{set_compare, Comparison, Relation};
pub use directions::{unit_directions, DEFAULT_DIRECTION_COUNT, DEFAULT_SEED};
pub use minnorm::{min_norm_point, MinNorm, DEFAULT_TOL as MIN_NORM_TOL};
pub use polytope::{Exposed, Polytope};
pub use vector::Vector;

