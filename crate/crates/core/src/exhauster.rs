//! Lower exhausters: finite families `E` of polytopes representing the
//! positively homogeneous function `h(v) = min_{C ∈ E} s(v | C)`.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{Polytope, Vector, MIN_NORM_TOL};
use crate::qdcalc::{active_indices, value_and_qd, FuncExpr};

pub use crate::sampling::{hadamard_lower, hadamard_upper, Estimate, Schedule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Polytope>", into = "Vec<Polytope>")]
pub struct LowerExhauster {
    members: Vec<Polytope>,
}

impl TryFrom<Vec<Polytope>> for LowerExhauster {
    type Error = Error;
    fn try_from(members: Vec<Polytope>) -> Result<Self> {
        LowerExhauster::new(members)
    }
}

impl From<LowerExhauster> for Vec<Polytope> {
    fn from(e: LowerExhauster) -> Self {
        e.members
    }
}

impl LowerExhauster {
    pub fn new(members: Vec<Polytope>) -> Result<Self> {
        let dim = members.first().ok_or(Error::Empty("exhauster family"))?.dim();
        for m in &members[1..] {
            check_dim(dim, m.dim())?;
        }
        Ok(LowerExhauster { members })
    }

    pub fn members(&self) -> &[Polytope] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// `h(v) = min` over members of the support value.
    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        check_dim(self.dim(), v.len())?;
        Ok(self.members.iter().map(|m| m.support_raw(v)).fold(f64::INFINITY, f64::min))
    }

    /// `‖E‖ = max` over members of the distance from the origin.
    pub fn norm(&self) -> Result<f64> {
        self.norm_with_tol(MIN_NORM_TOL)
    }

    pub fn norm_with_tol(&self, tol: f64) -> Result<f64> {
        let mut worst = 0.0_f64;
        for m in &self.members {
            worst = worst.max(m.min_norm_point(tol)?.distance);
        }
        Ok(worst)
    }

    /// Exhauster of `v -> min_i max_j <a_ij, v>`: member `i` is the hull of row `i`.
    pub fn from_minmax(rows: &[Vec<Vector>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty("min-max rows"));
        }
        let members = rows
            .iter()
            .map(|r| {
                if r.is_empty() {
                    Err(Error::Empty("min-max row"))
                } else {
                    Polytope::new(r.clone())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        LowerExhauster::new(members)
    }

    /// Exhauster of the directional derivative `f'(x; ·)` read off the
    /// expression.
    ///
    /// At a `Min` node the families of the active children are joined. Any
    /// other node with calculus pair `(sub, sup)` contributes `sub + w` for
    /// each vertex `w` of `sup`, since `f'(x; v) = min_w s(v | sub + w)`.
    pub fn from_expr(e: &FuncExpr, x: &[f64]) -> Result<Self> {
        check_dim(e.dim()?, x.len())?;
        let members = symbolic(e, x)?;
        LowerExhauster::new(members)
    }

    /// The family reduced to canonical, pairwise distinct members.
    pub fn canonicalize(&self) -> LowerExhauster {
        let mut out: Vec<Polytope> = Vec::new();
        for m in &self.members {
            let c = m.canonicalize();
            if !out.iter().any(|o| o.vertices() == c.vertices()) {
                out.push(c);
            }
        }
        LowerExhauster { members: out }
    }
}

fn symbolic(e: &FuncExpr, x: &[f64]) -> Result<Vec<Polytope>> {
    if let FuncExpr::Min(children) = e {
        let values = children.iter().map(|c| c.evaluate(x)).collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for i in active_indices(&values, false) {
            out.extend(symbolic(&children[i], x)?);
        }
        return Ok(out);
    }
    let (_, q) = value_and_qd(e, x)?;
    let sub = q.sub.canonicalize();
    q.sup
        .canonicalize()
        .vertices()
        .iter()
        .map(|w| sub.translate(w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    #[test]
    fn eval_examples() {
        let e = LowerExhauster::from_minmax(&[alloc::vec![v(&[1.0])], alloc::vec![v(&[-1.0])]]).unwrap();
        assert_eq!(e.eval(&[2.0]).unwrap(), -2.0);
        assert_eq!(e.norm().unwrap(), 1.0);
        let b = LowerExhauster::new(alloc::vec![Polytope::interval(-1.0, 1.0).unwrap()]).unwrap();
        assert_eq!(b.eval(&[3.0]).unwrap(), 3.0);
        assert_eq!(b.norm().unwrap(), 0.0);
        let p = LowerExhauster::from_minmax(&[alloc::vec![v(&[3.0, 4.0])]]).unwrap();
        assert_eq!(p.eval(&[1.0, 1.0]).unwrap(), 7.0);
        assert!((p.norm().unwrap() - 5.0).abs() < 1e-12);
        let m = LowerExhauster::from_minmax(&[alloc::vec![v(&[1.0]), v(&[-1.0])]]).unwrap();
        assert_eq!(m.eval(&[-2.0]).unwrap(), 2.0);
        assert!(LowerExhauster::from_minmax(&[alloc::vec![]]).is_err());
    }

    #[test]
    fn symbolic_abs_composition() {
        // ||x| - 1| at 0 has derivative -|v|.
        let inner = FuncExpr::Sum(alloc::vec![
            FuncExpr::affine(&[1.0], 0.0).unwrap().abs(),
            FuncExpr::affine(&[0.0], -1.0).unwrap(),
        ]);
        let f = inner.abs();
        let e = LowerExhauster::from_expr(&f, &[0.0]).unwrap();
        for t in [-2.0, -0.5, 0.5, 3.0] {
            assert_eq!(e.eval(&[t]).unwrap(), -f64::abs(t));
        }
        assert!((e.norm().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symbolic_min_of_affine() {
        let f = FuncExpr::Min(alloc::vec![
            FuncExpr::affine(&[1.0, 0.0], 0.0).unwrap(),
            FuncExpr::affine(&[0.0, 1.0], 0.0).unwrap(),
            FuncExpr::affine(&[1.0, 1.0], 5.0).unwrap(),
        ]);
        let e = LowerExhauster::from_expr(&f, &[0.0, 0.0]).unwrap();
        assert_eq!(e.members().len(), 2);
        assert_eq!(e.eval(&[1.0, -2.0]).unwrap(), -2.0);
    }
}
