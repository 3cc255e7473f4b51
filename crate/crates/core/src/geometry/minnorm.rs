//! Euclidean projection of the origin onto the convex hull of a point set.
//!
//! Wolfe's algorithm: keep a corral of affinely independent points, jump to
//! the affine min-norm point of the corral when it lies inside the simplex and
//! otherwise walk toward it until a barycentric weight hits zero.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, solve};

use super::Vector;

pub const DEFAULT_TOL: f64 = 1e-10;

/// Weights below this are treated as zero when shrinking the corral.
const WEIGHT_EPS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct MinNorm {
    pub point: Vector,
    pub distance: f64,
    pub iterations: usize,
}

/// Projects the origin onto `conv(points)`.
///
/// Stops once `<x, x - p> <= tol (1 + |p|) / 2` for every point `p`, which is
/// the variational inequality of the projection up to `tol`.
pub fn min_norm_point(points: &[Vector], tol: f64) -> Result<MinNorm> {
    if points.is_empty() {
        return Err(Error::Empty("point set"));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(alloc::format!("tolerance must be positive, got {tol}")));
    }
    let dim = points[0].dim();
    for p in points {
        crate::error::check_dim(dim, p.dim())?;
    }
    let pts: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
    let norms: Vec<f64> = pts.iter().map(|p| norm(p)).collect();
    // Floor keeps tiny inputs from being starved of iterations.
    let cap = (10 * points.len() * dim).max(100);

    let start = (0..pts.len())
        .min_by(|&a, &b| norms[a].total_cmp(&norms[b]))
        .unwrap_or(0);
    let mut corral: Vec<usize> = vec![start];
    let mut weights: Vec<f64> = vec![1.0];
    let mut x: Vec<f64> = pts[start].to_vec();

    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > cap {
            return Err(Error::NoConvergence { what: "min-norm point", iterations: cap });
        }
        let xx = dot(&x, &x);
        if xx == 0.0 {
            break;
        }
        let mut worst = None;
        let mut worst_excess = 0.0;
        for (i, p) in pts.iter().enumerate() {
            let excess = xx - dot(&x, p) - 0.5 * tol * (1.0 + norms[i]);
            if excess > worst_excess {
                worst_excess = excess;
                worst = Some(i);
            }
        }
        let Some(j) = worst else { break };
        if corral.contains(&j) {
            break;
        }
        corral.push(j);
        weights.push(0.0);

        loop {
            iterations += 1;
            if iterations > cap {
                return Err(Error::NoConvergence { what: "min-norm point", iterations: cap });
            }
            let Some(alpha) = affine_min_norm(&pts, &corral) else {
                // Numerically dependent corral: the new point adds nothing.
                corral.pop();
                weights.pop();
                return Ok(finish(x, iterations));
            };
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                weights = alpha;
                x = combine(&pts, &corral, &weights, dim);
                break;
            }
            let mut theta = 1.0_f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= WEIGHT_EPS && *w - *a > 0.0 {
                    theta = theta.min(*w / (*w - *a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = (1.0 - theta) * *w + theta * *a;
            }
            let mut k = 0;
            let mut removed = false;
            while k < corral.len() {
                if weights[k] <= WEIGHT_EPS {
                    corral.remove(k);
                    weights.remove(k);
                    removed = true;
                } else {
                    k += 1;
                }
            }
            if !removed {
                // theta clipped at 1 without zeroing a weight; drop the smallest.
                let (k, _) = weights
                    .iter()
                    .enumerate()
                    .min_by(|a, b| a.1.total_cmp(b.1))
                    .expect("corral is nonempty");
                corral.remove(k);
                weights.remove(k);
            }
            let total: f64 = weights.iter().sum();
            for w in weights.iter_mut() {
                *w /= total;
            }
            x = combine(&pts, &corral, &weights, dim);
            if corral.len() == 1 {
                break;
            }
        }
        if dot(&x, &x) >= xx {
            // No progress: roundoff has taken over.
            break;
        }
    }
    Ok(finish(x, iterations))
}

fn finish(x: Vec<f64>, iterations: usize) -> MinNorm {
    let distance = norm(&x);
    MinNorm { point: Vector::from_raw(x), distance, iterations }
}

fn combine(pts: &[&[f64]], corral: &[usize], weights: &[f64], dim: usize) -> Vec<f64> {
    let mut x = vec![0.0; dim];
    for (&i, &w) in corral.iter().zip(weights) {
        for (xk, pk) in x.iter_mut().zip(pts[i]) {
            *xk += w * pk;
        }
    }
    x
}

/// Barycentric weights of the min-norm point of the affine hull of the corral,
/// from the bordered Gram system `[G 1; 1' 0] [a; mu] = [0; 1]`.
fn affine_min_norm(pts: &[&[f64]], corral: &[usize]) -> Option<Vec<f64>> {
    let k = corral.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    let n = k + 1;
    let mut m = vec![0.0; n * n];
    for (r, &i) in corral.iter().enumerate() {
        for (c, &j) in corral.iter().enumerate() {
            m[r * n + c] = dot(pts[i], pts[j]);
        }
        m[r * n + k] = 1.0;
        m[k * n + r] = 1.0;
    }
    let mut rhs = vec![0.0; n];
    rhs[k] = 1.0;
    let sol = solve(m, rhs, n, 1e-13)?;
    Some(sol[..k].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    #[test]
    fn origin_inside_box() {
        let pts = [v(&[-1.0, -1.0]), v(&[1.0, -1.0]), v(&[1.0, 1.0]), v(&[-1.0, 1.0])];
        let r = min_norm_point(&pts, DEFAULT_TOL).unwrap();
        assert!(r.distance <= 1e-10);
    }

    #[test]
    fn symmetric_segment() {
        let r = min_norm_point(&[v(&[1.0, 0.0]), v(&[0.0, 1.0])], DEFAULT_TOL).unwrap();
        assert!((r.point[0] - 0.5).abs() < 1e-12);
        assert!((r.point[1] - 0.5).abs() < 1e-12);
        assert!((r.distance - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn segment_endpoint_is_closest() {
        // Dense sweep over t in [0,1] of |(2+t, 1-2t)|: the minimum is at t=0.
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..=100_000 {
            let t = i as f64 / 100_000.0;
            let d = libm::sqrt((2.0 + t) * (2.0 + t) + (1.0 - 2.0 * t) * (1.0 - 2.0 * t));
            if d < best.0 {
                best = (d, t);
            }
        }
        assert_eq!(best.1, 0.0);
        let r = min_norm_point(&[v(&[2.0, 1.0]), v(&[3.0, -1.0])], DEFAULT_TOL).unwrap();
        assert!((r.distance - best.0).abs() < 1e-12);
        assert!((r.point[0] - 2.0).abs() < 1e-12 && (r.point[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_and_bad_tol() {
        assert!(min_norm_point(&[], 1e-10).is_err());
        assert!(min_norm_point(&[v(&[1.0])], 0.0).is_err());
    }

    #[test]
    fn three_d_face_projection() {
        // Triangle in the plane z = 1: projection is (0,0,1).
        let pts = [v(&[1.0, 0.0, 1.0]), v(&[-1.0, 1.0, 1.0]), v(&[-1.0, -1.0, 1.0])];
        let r = min_norm_point(&pts, DEFAULT_TOL).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-12);
    }
}
