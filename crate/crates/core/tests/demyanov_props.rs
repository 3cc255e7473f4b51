mod common;

use common::{corpus, grid, polygon_pairs, Rng};
use wsharp_core::demyanov::{demcoqd, demyanov_diff, demyanov_diff_sampled, Backend};
use wsharp_core::{set_compare, Polytope, Relation};

fn equal(a: &Polytope, b: &Polytope) -> bool {
    set_compare(a, b, 1e-9).unwrap().relation == Relation::Equal
}

fn within(a: &Polytope, b: &Polytope) -> bool {
    set_compare(a, b, 1e-9).unwrap().first_in_second()
}

#[test]
fn laws_on_random_planar_pairs() {
    let pairs = polygon_pairs(60, 0xD3);
    let extra = polygon_pairs(60, 0xE4);
    for ((a, b), (c, e)) in pairs.iter().zip(&extra) {
        let ab = demyanov_diff(a, b).unwrap();
        assert_eq!(ab.backend, Backend::Exact2d);
        assert_eq!(ab.sample_count, 0);
        // Class invariance.
        let shifted = demyanov_diff(&a.minkowski_sum(e).unwrap(), &b.minkowski_sum(e).unwrap()).unwrap();
        assert!(equal(&ab.set, &shifted.set));
        assert!(equal(&demyanov_diff(a, a).unwrap().set, &Polytope::origin(2)));
        assert!(equal(&demyanov_diff(a, &Polytope::origin(2)).unwrap().set, a));
        let sub = Polytope::new(a.vertices()[..1].to_vec()).unwrap();
        assert!(demyanov_diff(a, &sub).unwrap().set.min_norm_point(1e-10).unwrap().distance <= 1e-9);
        let lhs = demyanov_diff(&a.minkowski_sum(c).unwrap(), &b.minkowski_sum(e).unwrap()).unwrap();
        let rhs = ab.set.minkowski_sum(&demyanov_diff(c, e).unwrap().set).unwrap();
        assert!(within(&lhs.set, &rhs));
        assert!(within(&ab.set, &a.minkowski_sum(&b.neg()).unwrap()));
    }
}

/// Smallest angular gap between normal-fan breakpoints of the two polygons,
/// counting both orientations of every edge normal.
fn smallest_arc(a: &Polytope, b: &Polytope) -> f64 {
    let mut angles = Vec::new();
    for p in [a.canonicalize(), b.canonicalize()] {
        let v = p.vertices();
        if v.len() < 2 {
            continue;
        }
        for i in 0..v.len() {
            let (p0, p1) = (v[i].as_slice(), v[(i + 1) % v.len()].as_slice());
            let t = (p1[0] - p0[0]).atan2(-(p1[1] - p0[1]));
            angles.push(t.rem_euclid(std::f64::consts::TAU));
            angles.push((t + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU));
        }
    }
    angles.sort_by(f64::total_cmp);
    if angles.len() < 2 {
        return std::f64::consts::TAU;
    }
    let mut gap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
    for w in angles.windows(2) {
        gap = gap.min(w[1] - w[0]);
    }
    gap
}

#[test]
fn sampled_backend_is_an_inner_approximation() {
    let count = 10_000;
    let spacing = std::f64::consts::TAU / count as f64;
    let mut wide = 0;
    for (a, b) in polygon_pairs(40, 0xA7) {
        let exact = demyanov_diff(&a, &b).unwrap();
        let sampled = demyanov_diff_sampled(&a, &b, count, 0x5EED).unwrap();
        assert_eq!(sampled.backend, Backend::Sampled);
        assert_eq!(sampled.sample_count, count);
        assert!(within(&sampled.set, &exact.set));
        if smallest_arc(&a, &b) > 2.0 * spacing {
            // Every arc holds a sample, so every vertex pair is found.
            wide += 1;
            assert!(set_compare(&sampled.set, &exact.set, 1e-9).unwrap().hausdorff <= 1e-9);
        }
    }
    assert!(wide > 20);
}

/// Clarke subdifferential at 0 of `v -> s(v|A) - s(v|B)` for intervals: the
/// function is linear on each half-line, so it is the hull of the two slopes.
fn clarke_1d(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let right = a.1 - b.1;
    let left = a.0 - b.0;
    (left.min(right), left.max(right))
}

#[test]
fn one_dimensional_difference_is_the_clarke_subdifferential() {
    let mut rng = Rng::new(99);
    for _ in 0..50 {
        let (a, b) = (common::interval(&mut rng), common::interval(&mut rng));
        let ends = |p: &Polytope| {
            let s: Vec<f64> = p.vertices().iter().map(|v| v.as_slice()[0]).collect();
            (s.iter().copied().fold(f64::INFINITY, f64::min), s.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        };
        let (lo, hi) = clarke_1d(ends(&a), ends(&b));
        let d = demyanov_diff(&a, &b).unwrap();
        assert_eq!(d.backend, Backend::Exact1d);
        assert_eq!(ends(&d.set), (lo, hi));
    }
}

#[test]
fn zero_lies_in_demcoqd_at_local_minimizers() {
    for case in corpus() {
        if !case.lipschitz {
            continue;
        }
        // Spacing 0.01 in 1D and 0.1 in 2D puts every minimizer of the corpus on the grid.
        let n = if case.bounds.len() == 1 { ((case.bounds[0].1 - case.bounds[0].0) / 0.01).round() as usize + 1 } else { 41 };
        let pts = grid(&case.bounds, n);
        let vals: Vec<f64> = pts.iter().map(|x| case.f.evaluate(x).unwrap()).collect();
        let m = vals.iter().copied().fold(f64::INFINITY, f64::min);
        for (x, v) in pts.iter().zip(&vals) {
            let interior = x.iter().zip(&case.bounds).all(|(c, (lo, hi))| c > lo && c < hi);
            if *v > m + 1e-9 || !interior {
                continue;
            }
            let d = demcoqd(&case.f, x).unwrap();
            assert!(d.set.min_norm_point(1e-10).unwrap().distance <= 1e-9, "{} at {x:?}", case.name);
        }
    }
}

#[test]
fn sum_rule_is_an_inclusion() {
    let pieces = corpus().into_iter().filter(|c| c.bounds.len() == 2 && c.lipschitz).map(|c| c.f).collect::<Vec<_>>();
    for (i, e1) in pieces.iter().enumerate() {
        let e2 = &pieces[(i + 3) % pieces.len()];
        let sum = wsharp_core::FuncExpr::Sum(vec![e1.clone(), e2.clone()]);
        for x in grid(&[(-1.0, 1.0), (-1.0, 1.0)], 5) {
            let lhs = demcoqd(&sum, &x).unwrap();
            let rhs = demcoqd(e1, &x).unwrap().set.minkowski_sum(&demcoqd(e2, &x).unwrap().set).unwrap();
            if lhs.approx {
                continue;
            }
            assert!(set_compare(&lhs.set, &rhs, 1e-9).unwrap().first_in_second(), "pair {i} at {x:?}");
        }
    }
}
