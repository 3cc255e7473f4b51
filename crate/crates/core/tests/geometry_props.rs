use proptest::prelude::*;
use wsharp_core::geometry::{min_norm_point, unit_directions};
use wsharp_core::{set_compare, Polytope, Relation, Vector};

fn polytope(dim: usize, max_vertices: usize) -> impl Strategy<Value = Polytope> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, dim), 1..=max_vertices)
        .prop_map(|rows| Polytope::new(rows.into_iter().map(|r| Vector::new(r).unwrap()).collect()).unwrap())
}

fn equal(a: &Polytope, b: &Polytope) -> bool {
    set_compare(a, b, 1e-9).unwrap().relation == Relation::Equal
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_is_additive(dim in 1usize..=4, seed in any::<u64>(), p in polytope(4, 8), q in polytope(4, 8)) {
        // Project the 4-d samples to the drawn dimension.
        let cut = |s: &Polytope| Polytope::new(s.vertices().iter().map(|v| Vector::from_slice(&v.as_slice()[..dim]).unwrap()).collect()).unwrap();
        let (p, q) = (cut(&p), cut(&q));
        let sum = p.minkowski_sum(&q).unwrap();
        for v in unit_directions(dim, 100, seed) {
            let v = v.as_slice();
            let lhs = sum.support(v).unwrap();
            let rhs = p.support(v).unwrap() + q.support(v).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn min_norm_point_satisfies_variational_inequality(p in polytope(3, 12)) {
        let tol = 1e-10;
        let r = min_norm_point(p.vertices(), tol).unwrap();
        let x = r.point.as_slice();
        for q in p.vertices() {
            let q = q.as_slice();
            let vi: f64 = x.iter().zip(q).map(|(a, b)| a * (b - a)).sum();
            let qn = q.iter().map(|a| a * a).sum::<f64>().sqrt();
            prop_assert!(vi >= -1e-8 * (1.0 + qn), "vi = {vi}");
        }
        prop_assert!((r.distance - r.point.norm()).abs() < 1e-12);
    }

    #[test]
    fn canonicalization_is_idempotent(dim in 1usize..=3, p in polytope(3, 12)) {
        let p = Polytope::new(p.vertices().iter().map(|v| Vector::from_slice(&v.as_slice()[..dim]).unwrap()).collect()).unwrap();
        let once = p.canonicalize();
        let twice = once.canonicalize();
        prop_assert_eq!(once.vertices(), twice.vertices());
        for v in unit_directions(dim, 64, 7) {
            let v = v.as_slice();
            prop_assert!((p.support(v).unwrap() - once.support(v).unwrap()).abs() <= 1e-12);
        }
    }

    #[test]
    fn sums_and_hulls_commute_and_associate(a in polytope(2, 8), b in polytope(2, 8), c in polytope(2, 8)) {
        let ab = a.minkowski_sum(&b).unwrap();
        prop_assert!(equal(&ab, &b.minkowski_sum(&a).unwrap()));
        prop_assert!(equal(&ab.minkowski_sum(&c).unwrap(), &a.minkowski_sum(&b.minkowski_sum(&c).unwrap()).unwrap()));
        let h = Polytope::conv_union(&[a.clone(), b.clone()]).unwrap();
        prop_assert!(equal(&h, &Polytope::conv_union(&[b.clone(), a.clone()]).unwrap()));
        let left = Polytope::conv_union(&[h, c.clone()]).unwrap();
        let right = Polytope::conv_union(&[a, Polytope::conv_union(&[b, c]).unwrap()]).unwrap();
        prop_assert!(equal(&left, &right));
    }

    #[test]
    fn scaling_matches_support(alpha in -3.0..3.0f64, p in polytope(2, 10)) {
        let s = p.scale(alpha).unwrap();
        for v in unit_directions(2, 32, 3) {
            let v = v.as_slice();
            let expected = if alpha >= 0.0 { alpha * p.support(v).unwrap() } else {
                let w: Vec<f64> = v.iter().map(|a| -a).collect();
                -alpha * p.support(&w).unwrap()
            };
            prop_assert!((s.support(v).unwrap() - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
        }
    }
}

#[test]
fn min_norm_of_a_polytope_containing_the_origin_is_zero() {
    let p = Polytope::cube(3, 1.0);
    assert!(p.min_norm_point(1e-10).unwrap().distance <= 1e-10);
    let q = Polytope::from_rows(&[&[1.0, 1.0], &[1.0, -1.0]]).unwrap();
    assert!((q.min_norm_point(1e-10).unwrap().distance - 1.0).abs() < 1e-12);
}
