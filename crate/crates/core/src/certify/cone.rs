//! Polyhedral cones: nonnegative least squares, projection, and the distance
//! from the origin to `C + λ (N ∩ B)` for a polytope `C`, a finitely
//! generated cone `N` and the closed unit ball `B`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{min_norm_point, Polytope, Vector, MIN_NORM_TOL};
use crate::linalg::{dot, norm, solve};

/// Lawson-Hanson nonnegative least squares: `argmin_{μ >= 0} |Σ μ_j a_j - y|`.
pub fn nnls(cols: &[Vector], y: &[f64], tol: f64) -> Result<Vec<f64>> {
    let m = cols.len();
    for c in cols {
        crate::error::check_dim(y.len(), c.dim())?;
    }
    let mut mu = alloc::vec![0.0; m];
    let mut passive = alloc::vec![false; m];
    let combine = |mu: &[f64]| -> Vec<f64> {
        let mut out = alloc::vec![0.0; y.len()];
        for (c, &w) in cols.iter().zip(mu) {
            for (o, a) in out.iter_mut().zip(c.as_slice()) {
                *o += w * a;
            }
        }
        out
    };
    let scale = 1.0 + norm(y) * cols.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let cap = 3 * m + 10;
    for _ in 0..cap {
        let r: Vec<f64> = y.iter().zip(combine(&mu)).map(|(a, b)| a - b).collect();
        let w: Vec<f64> = cols.iter().map(|c| dot(c.as_slice(), &r)).collect();
        let next = (0..m).filter(|&j| !passive[j]).max_by(|&a, &b| w[a].total_cmp(&w[b]).then(b.cmp(&a)));
        match next {
            Some(j) if w[j] > tol * scale => passive[j] = true,
            _ => return Ok(mu),
        }
        for _ in 0..cap {
            let p: Vec<usize> = (0..m).filter(|&j| passive[j]).collect();
            let k = p.len();
            let mut gram = alloc::vec![0.0; k * k];
            let mut rhs = alloc::vec![0.0; k];
            for (a, &i) in p.iter().enumerate() {
                rhs[a] = dot(cols[i].as_slice(), y);
                for (b, &j) in p.iter().enumerate() {
                    gram[a * k + b] = dot(cols[i].as_slice(), cols[j].as_slice());
                }
            }
            let s_p = solve(gram, rhs, k, 1e-13).ok_or(Error::NoConvergence { what: "nnls", iterations: cap })?;
            let mut s = alloc::vec![0.0; m];
            for (a, &i) in p.iter().enumerate() {
                s[i] = s_p[a];
            }
            if p.iter().all(|&i| s[i] > 0.0) {
                mu = s;
                break;
            }
            let mut alpha = 1.0_f64;
            for &i in &p {
                if s[i] <= 0.0 {
                    alpha = alpha.min(mu[i] / (mu[i] - s[i]));
                }
            }
            for j in 0..m {
                mu[j] += alpha * (s[j] - mu[j]);
                if passive[j] && mu[j] <= 1e-15 * scale {
                    mu[j] = 0.0;
                    passive[j] = false;
                }
            }
        }
    }
    Err(Error::NoConvergence { what: "nnls", iterations: cap })
}

/// Euclidean projection of `y` onto the cone generated by `cols`.
pub fn project_onto_cone(cols: &[Vector], y: &[f64]) -> Result<Vec<f64>> {
    let mu = nnls(cols, y, 1e-14)?;
    let mut out = alloc::vec![0.0; y.len()];
    for (c, &w) in cols.iter().zip(&mu) {
        for (o, a) in out.iter_mut().zip(c.as_slice()) {
            *o += w * a;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CappedConeDistance {
    /// Norm of the best point found, an upper bound on the distance.
    pub distance: f64,
    /// Certified lower bound from the last linear minimization.
    pub lower_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Iteration cap of the conditional-gradient loop.
pub const CG_MAX_ITER: usize = 500;

/// `dist(0, C + λ (cone(gens) ∩ B))` by fully corrective conditional gradient.
///
/// The linear minimization oracle over the sum splits into the vertex of `C`
/// minimizing `<z, ·>` plus `λ u`, where `u` is the normalized projection of
/// `-z` onto the cone (zero when that projection vanishes). Each iteration
/// re-solves the min-norm problem over all atoms collected so far.
pub fn capped_cone_distance(c: &Polytope, gens: &[Vector], lambda: f64, tol: f64) -> Result<CappedConeDistance> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(alloc::format!("lambda must be nonnegative, got {lambda}")));
    }
    if gens.is_empty() || lambda == 0.0 {
        let d = c.min_norm_point(MIN_NORM_TOL)?.distance;
        return Ok(CappedConeDistance { distance: d, lower_bound: d, iterations: 0, converged: true });
    }
    let lmo = |z: &[f64]| -> Result<Vector> {
        let e = c
            .vertices()
            .iter()
            .min_by(|a, b| dot(a.as_slice(), z).total_cmp(&dot(b.as_slice(), z)))
            .expect("nonempty polytope");
        let minus: Vec<f64> = z.iter().map(|v| -v).collect();
        let pr = project_onto_cone(gens, &minus)?;
        let n = norm(&pr);
        let mut s = e.as_slice().to_vec();
        if n > 1e-15 * (1.0 + norm(z)) {
            for (si, pi) in s.iter_mut().zip(&pr) {
                *si += lambda * pi / n;
            }
        }
        Vector::new(s)
    };
    let mut atoms: Vec<Vector> = alloc::vec![c.vertices()[0].clone()];
    let mut lower = 0.0;
    for it in 1..=CG_MAX_ITER {
        let z = min_norm_point(&atoms, MIN_NORM_TOL)?;
        let zn = z.distance;
        if zn == 0.0 {
            return Ok(CappedConeDistance { distance: 0.0, lower_bound: 0.0, iterations: it, converged: true });
        }
        let s = lmo(z.point.as_slice())?;
        let zs = dot(z.point.as_slice(), s.as_slice());
        lower = f64::max(lower, zs / zn);
        let gap = zn * zn - zs;
        if gap <= tol * (1.0 + zn * zn) {
            return Ok(CappedConeDistance { distance: zn, lower_bound: lower.max(0.0).min(zn), iterations: it, converged: true });
        }
        if atoms.iter().any(|a| a.as_slice() == s.as_slice()) {
            // No new atom: the min-norm solve is already at its limit.
            return Ok(CappedConeDistance { distance: zn, lower_bound: lower.max(0.0).min(zn), iterations: it, converged: true });
        }
        atoms.push(s);
    }
    let z = min_norm_point(&atoms, MIN_NORM_TOL)?;
    Ok(CappedConeDistance { distance: z.distance, lower_bound: lower.max(0.0).min(z.distance), iterations: CG_MAX_ITER, converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::from_slice(c).unwrap()
    }

    #[test]
    fn nnls_small() {
        // Cone spanned by e1 and e1+e2; target inside and outside.
        let cols = [v(&[1.0, 0.0]), v(&[1.0, 1.0])];
        let p = project_onto_cone(&cols, &[3.0, 1.0]).unwrap();
        assert!((p[0] - 3.0).abs() < 1e-12 && (p[1] - 1.0).abs() < 1e-12);
        let p = project_onto_cone(&cols, &[-1.0, 2.0]).unwrap();
        // Nearest point on the ray through (1,1): (0.5, 0.5).
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
        let p = project_onto_cone(&cols, &[-1.0, -1.0]).unwrap();
        assert_eq!(p, alloc::vec![0.0, 0.0]);
    }

    #[test]
    fn capped_intervals() {
        let n = [v(&[1.0])];
        let c = Polytope::point(v(&[2.0]));
        let r = capped_cone_distance(&c, &n, 1.0, 1e-14).unwrap();
        assert!((r.distance - 2.0).abs() < 1e-12 && r.converged);
        let c = Polytope::point(v(&[-2.0]));
        let r = capped_cone_distance(&c, &n, 1.0, 1e-14).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-12);
        assert!((r.lower_bound - 1.0).abs() < 1e-12);
    }

    #[test]
    fn capped_disc_in_plane() {
        // {(-3, 0)} + 2 (cone(e1, e2) ∩ B): the nearest point is (-1, 0).
        let n = [v(&[1.0, 0.0]), v(&[0.0, 1.0])];
        let c = Polytope::point(v(&[-3.0, 0.0]));
        let r = capped_cone_distance(&c, &n, 2.0, 1e-14).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-9, "{r:?}");
        // {(-1, -1)} + (cone ∩ B): quarter disc reaches distance sqrt(2) - 1.
        let c = Polytope::point(v(&[-1.0, -1.0]));
        let r = capped_cone_distance(&c, &n, 1.0, 1e-14).unwrap();
        assert!((r.distance - (2f64.sqrt() - 1.0)).abs() < 1e-6, "{r:?}");
        assert!(r.lower_bound <= r.distance);
    }
}
