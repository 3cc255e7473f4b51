//! Extreme-point extraction. Exact monotone chain in dims 1-2; in higher
//! dimension each vertex is tested for membership in the hull of the rest.

use alloc::vec::Vec;

use super::minnorm::min_norm_point;
use super::Vector;

/// Relative tolerance under which two vertices coincide or a vertex counts
/// as lying on the hull of the others.
pub(crate) const MERGE_EPS: f64 = 1e-12;

pub(crate) fn coord_scale(vertices: &[Vector]) -> f64 {
    vertices
        .iter()
        .flat_map(|v| v.as_slice().iter())
        .fold(1.0_f64, |acc, c| acc.max(c.abs()))
}

pub(crate) fn extreme_points(vertices: &[Vector]) -> Vec<Vector> {
    debug_assert!(!vertices.is_empty());
    match vertices[0].dim() {
        1 => hull_1d(vertices),
        2 => hull_2d(vertices),
        _ => hull_nd(vertices),
    }
}

fn hull_1d(vertices: &[Vector]) -> Vec<Vector> {
    let mut lo = vertices[0][0];
    let mut hi = lo;
    for v in vertices {
        lo = lo.min(v[0]);
        hi = hi.max(v[0]);
    }
    let eps = MERGE_EPS * coord_scale(vertices);
    if hi - lo <= eps {
        alloc::vec![Vector::from_raw(alloc::vec![lo])]
    } else {
        alloc::vec![Vector::from_raw(alloc::vec![lo]), Vector::from_raw(alloc::vec![hi])]
    }
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull starting from the lexicographically smallest point.
fn hull_2d(vertices: &[Vector]) -> Vec<Vector> {
    let scale = coord_scale(vertices);
    let eps = MERGE_EPS * scale;
    let cross_eps = MERGE_EPS * scale * scale;
    let mut pts: Vec<[f64; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup_by(|a, b| (a[0] - b[0]).abs() <= eps && (a[1] - b[1]).abs() <= eps);
    if pts.len() == 1 {
        return alloc::vec![Vector::from_raw(pts[0].to_vec())];
    }
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(pts.len() + 1);
    for p in pts.iter() {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= cross_eps {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= cross_eps {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    if hull.len() == 2 {
        let d0 = (hull[0][0] - hull[1][0]).abs().max((hull[0][1] - hull[1][1]).abs());
        if d0 <= eps {
            hull.pop();
        }
    }
    hull.into_iter().map(|p| Vector::from_raw(p.to_vec())).collect()
}

fn hull_nd(vertices: &[Vector]) -> Vec<Vector> {
    let scale = coord_scale(vertices);
    let eps = MERGE_EPS * scale;
    let mut pts: Vec<Vector> = Vec::with_capacity(vertices.len());
    for v in vertices {
        let dup = pts.iter().any(|p| {
            p.as_slice().iter().zip(v.as_slice()).all(|(a, b)| (a - b).abs() <= eps)
        });
        if !dup {
            pts.push(v.clone());
        }
    }
    let mut i = 0;
    while i < pts.len() && pts.len() > 1 {
        let probe = &pts[i];
        let shifted: Vec<Vector> = pts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.sub(probe).expect("equal dims"))
            .collect();
        let redundant = match min_norm_point(&shifted, 1e-13) {
            Ok(r) => r.distance <= 1e-10 * scale,
            Err(_) => false,
        };
        if redundant {
            pts.remove(i);
        } else {
            i += 1;
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[&[f64]]) -> Vec<Vector> {
        raw.iter().map(|c| Vector::from_slice(c).unwrap()).collect()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let h = hull_2d(&pts(&[
            &[0.0, 0.0],
            &[1.0, 0.0],
            &[1.0, 1.0],
            &[0.0, 1.0],
            &[0.5, 0.5],
            &[0.5, 0.0],
        ]));
        assert_eq!(h.len(), 4);
        assert_eq!(h[0].as_slice(), &[0.0, 0.0]);
        assert_eq!(h[1].as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn collinear_and_duplicate() {
        assert_eq!(hull_2d(&pts(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 2.0]])).len(), 2);
        assert_eq!(hull_2d(&pts(&[&[3.0, 1.0], &[3.0, 1.0]])).len(), 1);
        assert_eq!(hull_1d(&pts(&[&[2.0], &[0.0], &[1.0]])).len(), 2);
    }

    #[test]
    fn cube_with_center() {
        let mut raw = Vec::new();
        for i in 0..8 {
            raw.push(Vector::from_slice(&[
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ]).unwrap());
        }
        raw.push(Vector::from_slice(&[0.5, 0.5, 0.5]).unwrap());
        raw.push(Vector::from_slice(&[0.5, 0.5, 1.0]).unwrap());
        assert_eq!(hull_nd(&raw).len(), 8);
    }
}
