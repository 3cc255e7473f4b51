use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

use super::directions::{unit_directions, DEFAULT_DIRECTION_COUNT, DEFAULT_SEED};
use super::minnorm::DEFAULT_TOL;
use super::Polytope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    /// The first set is contained in the second.
    Subset,
    /// The second set is contained in the first.
    Superset,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub relation: Relation,
    pub hausdorff: f64,
}

impl Comparison {
    /// `P ⊆ Q` holds (including equality).
    pub fn first_in_second(&self) -> bool {
        matches!(self.relation, Relation::Equal | Relation::Subset)
    }
}

/// Compares two polytopes up to `tol`.
///
/// In dims 1 and 2 containment is decided exactly from vertex-to-set
/// distances and the Hausdorff distance is exact. In higher dims both come
/// from support values over the fixed direction set (4096 directions, seed
/// `0x5EED`).
pub fn set_compare(p: &Polytope, q: &Polytope, tol: f64) -> Result<Comparison> {
    check_dim(p.dim(), q.dim())?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("tolerance {tol} < 0")));
    }
    let (p_in_q, q_in_p, hausdorff) = if p.dim() <= 2 {
        let p = p.canonicalize();
        let q = q.canonicalize();
        let dist_tol = DEFAULT_TOL.min(tol.max(1e-15));
        let pq = max_vertex_distance(&p, &q, dist_tol)?;
        let qp = max_vertex_distance(&q, &p, dist_tol)?;
        (pq <= tol, qp <= tol, pq.max(qp))
    } else {
        let dirs = unit_directions(p.dim(), DEFAULT_DIRECTION_COUNT, DEFAULT_SEED);
        let mut over = 0.0_f64;
        let mut under = 0.0_f64;
        for d in &dirs {
            let gap = p.support_raw(d.as_slice()) - q.support_raw(d.as_slice());
            over = over.max(gap);
            under = under.max(-gap);
        }
        (over <= tol, under <= tol, over.max(under))
    };
    let relation = match (p_in_q, q_in_p) {
        (true, true) => Relation::Equal,
        (true, false) => Relation::Subset,
        (false, true) => Relation::Superset,
        (false, false) => Relation::Incomparable,
    };
    Ok(Comparison { relation, hausdorff })
}

/// Largest distance from a vertex of `a` to the set `b`.
fn max_vertex_distance(a: &Polytope, b: &Polytope, tol: f64) -> Result<f64> {
    let dists: Vec<f64> = a
        .vertices()
        .iter()
        .map(|v| b.distance_to(v.as_slice(), tol))
        .collect::<Result<_>>()?;
    Ok(dists.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = Polytope::cube(2, 1.0);
        let c = set_compare(&p, &p, 1e-9).unwrap();
        assert_eq!(c.relation, Relation::Equal);
        assert_eq!(c.hausdorff, 0.0);

        let a = Polytope::interval(0.0, 1.0).unwrap();
        let b = Polytope::interval(0.0, 3.0).unwrap();
        let c = set_compare(&a, &b, 1e-9).unwrap();
        assert_eq!(c.relation, Relation::Subset);
        assert!((c.hausdorff - 2.0).abs() < 1e-12);

        let a = Polytope::interval(-1.0, 2.0).unwrap();
        let b = Polytope::interval(0.0, 1.0).unwrap();
        assert_eq!(set_compare(&b, &a, 1e-9).unwrap().relation, Relation::Subset);
        let c = Polytope::interval(0.5, 3.0).unwrap();
        assert_eq!(set_compare(&a, &c, 1e-9).unwrap().relation, Relation::Incomparable);
    }

    #[test]
    fn three_d_by_directions() {
        let a = Polytope::cube(3, 1.0);
        let b = Polytope::cube(3, 2.0);
        let c = set_compare(&a, &b, 1e-9).unwrap();
        assert_eq!(c.relation, Relation::Subset);
        assert!(c.hausdorff <= 3f64.sqrt() + 1e-12 && c.hausdorff > 1.6);
        assert_eq!(set_compare(&b, &b, 0.0).unwrap().relation, Relation::Equal);
    }
}
