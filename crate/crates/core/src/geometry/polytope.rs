use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::dot;

use super::hull::extreme_points;
use super::minnorm::{min_norm_point, MinNorm};
use super::Vector;

/// Convex compact subset of `R^n` given by a finite vertex list.
///
/// `canonical` is set when the list holds exactly the extreme points. Most
/// operations accept either form; outputs of sums and hulls are canonical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Polytope {
    vertices: Vec<Vector>,
    canonical: bool,
}

/// Result of [`Polytope::exposed_vertices`].
#[derive(Debug, Clone, PartialEq)]
pub struct Exposed {
    pub vertices: Vec<Vector>,
    pub support: f64,
    /// More than one extreme point attains the support value.
    pub tie: bool,
}

impl Polytope {
    pub fn new(vertices: Vec<Vector>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::Empty("polytope"))?;
        let dim = first.dim();
        for v in &vertices {
            check_dim(dim, v.dim())?;
        }
        Ok(Polytope { vertices, canonical: false })
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let vs = rows.iter().map(|r| Vector::from_slice(r)).collect::<Result<Vec<_>>>()?;
        Self::new(vs)
    }

    pub fn point(v: Vector) -> Self {
        Polytope { vertices: alloc::vec![v], canonical: true }
    }

    pub fn origin(dim: usize) -> Self {
        Self::point(Vector::zeros(dim))
    }

    /// The segment `[lo, hi]` of the real line.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Polytope::from_rows(&[&[lo], &[hi]]).map(|p| p.canonicalize())
    }

    /// The cube `[-r, r]^dim`.
    pub fn cube(dim: usize, r: f64) -> Self {
        let mut vs = Vec::with_capacity(1 << dim);
        for mask in 0..(1usize << dim) {
            let c = (0..dim).map(|i| if mask >> i & 1 == 1 { r } else { -r }).collect();
            vs.push(Vector::from_raw(c));
        }
        Polytope { vertices: vs, canonical: false }.canonicalize()
    }

    /// Inner polytope stand-in for the closed Euclidean unit ball.
    ///
    /// Returns the set and whether it is approximate: dim 1 is exact
    /// (`[-1, 1]`), dim 2 is the regular 32-gon, higher dims use the
    /// cross-polytope vertices together with the normalized cube corners.
    pub fn unit_ball_standin(dim: usize) -> (Self, bool) {
        match dim {
            1 => (Polytope::interval(-1.0, 1.0).expect("finite"), false),
            2 => {
                let n = 32;
                let vs = (0..n)
                    .map(|k| {
                        let t = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
                        Vector::from_raw(alloc::vec![libm::cos(t), libm::sin(t)])
                    })
                    .collect();
                (Polytope { vertices: vs, canonical: true }, true)
            }
            _ => {
                let mut vs = Vec::new();
                for i in 0..dim {
                    vs.push(Vector::unit(dim, i));
                    vs.push(Vector::unit(dim, i).scale(-1.0));
                }
                let c = 1.0 / libm::sqrt(dim as f64);
                for mask in 0..(1usize << dim) {
                    let v = (0..dim).map(|i| if mask >> i & 1 == 1 { c } else { -c }).collect();
                    vs.push(Vector::from_raw(v));
                }
                // All points lie on the unit sphere, hence all are extreme.
                (Polytope { vertices: vs, canonical: true }, true)
            }
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn canonicalize(&self) -> Polytope {
        if self.canonical {
            return self.clone();
        }
        Polytope { vertices: extreme_points(&self.vertices), canonical: true }
    }

    /// `s(v | P) = max <p, v>` over the vertices.
    pub fn support(&self, v: &[f64]) -> Result<f64> {
        check_dim(self.dim(), v.len())?;
        Ok(self.support_raw(v))
    }

    #[inline]
    pub(crate) fn support_raw(&self, v: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|p| dot(p.as_slice(), v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of a maximizing vertex together with the support value and the
    /// number of vertices within `tie_tol` of it.
    pub(crate) fn argmax_raw(&self, v: &[f64], tie_tol: f64) -> (usize, f64, usize) {
        let mut best = 0;
        let mut value = f64::NEG_INFINITY;
        let vals: Vec<f64> = self.vertices.iter().map(|p| dot(p.as_slice(), v)).collect();
        for (i, &s) in vals.iter().enumerate() {
            if s > value {
                value = s;
                best = i;
            }
        }
        let ties = vals.iter().filter(|&&s| s >= value - tie_tol).count();
        (best, value, ties)
    }

    /// Vertices of the max-face generated by `v`, i.e. those within `tie_tol`
    /// of the support value. Works on the canonical vertex list.
    pub fn exposed_vertices(&self, v: &[f64], tie_tol: f64) -> Result<Exposed> {
        check_dim(self.dim(), v.len())?;
        if !(tie_tol >= 0.0) {
            return Err(Error::InvalidArgument(alloc::format!("tie tolerance {tie_tol} < 0")));
        }
        let canon = self.canonicalize();
        let support = canon.support_raw(v);
        let vertices: Vec<Vector> = canon
            .vertices
            .into_iter()
            .filter(|p| dot(p.as_slice(), v) >= support - tie_tol)
            .collect();
        let tie = vertices.len() > 1;
        Ok(Exposed { vertices, support, tie })
    }

    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        check_dim(self.dim(), other.dim())?;
        let a = self.canonicalize();
        let b = other.canonicalize();
        let mut vs = Vec::with_capacity(a.vertices.len() * b.vertices.len());
        for p in &a.vertices {
            for q in &b.vertices {
                vs.push(p.add(q).expect("checked dims"));
            }
        }
        Ok(Polytope { vertices: vs, canonical: false }.canonicalize())
    }

    /// `alpha * P`; negative `alpha` reflects through the origin.
    pub fn scale(&self, alpha: f64) -> Result<Polytope> {
        if !alpha.is_finite() {
            return Err(Error::NonFinite("scale factor"));
        }
        if alpha == 0.0 {
            return Ok(Polytope::origin(self.dim()));
        }
        Ok(Polytope {
            vertices: self.vertices.iter().map(|v| v.scale(alpha)).collect(),
            canonical: self.canonical,
        })
    }

    /// `-P`.
    pub fn neg(&self) -> Polytope {
        Polytope {
            vertices: self.vertices.iter().map(|v| v.scale(-1.0)).collect(),
            canonical: self.canonical,
        }
    }

    pub fn translate(&self, t: &Vector) -> Result<Polytope> {
        check_dim(self.dim(), t.dim())?;
        Ok(Polytope {
            vertices: self.vertices.iter().map(|v| v.add(t).expect("checked")).collect(),
            canonical: self.canonical,
        })
    }

    /// Convex hull of a union of polytopes.
    pub fn conv_union(parts: &[Polytope]) -> Result<Polytope> {
        let first = parts.first().ok_or(Error::Empty("polytope list"))?;
        let dim = first.dim();
        let mut vs = Vec::new();
        for p in parts {
            check_dim(dim, p.dim())?;
            vs.extend(p.vertices.iter().cloned());
        }
        Ok(Polytope { vertices: vs, canonical: false }.canonicalize())
    }

    /// Projection of the origin onto the set.
    pub fn min_norm_point(&self, tol: f64) -> Result<MinNorm> {
        min_norm_point(&self.vertices, tol)
    }

    /// Euclidean distance from `p` to the set.
    pub fn distance_to(&self, p: &[f64], tol: f64) -> Result<f64> {
        check_dim(self.dim(), p.len())?;
        let pv = Vector::from_slice(p)?;
        let shifted: Vec<Vector> = self.vertices.iter().map(|v| v.sub(&pv).expect("checked")).collect();
        Ok(min_norm_point(&shifted, tol)?.distance)
    }
}

impl TryFrom<Vec<Vec<f64>>> for Polytope {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        let vs = rows.into_iter().map(Vector::new).collect::<Result<Vec<_>>>()?;
        Polytope::new(vs)
    }
}

impl From<Polytope> for Vec<Vec<f64>> {
    fn from(p: Polytope) -> Self {
        p.vertices.into_iter().map(Vector::into_inner).collect()
    }
}
