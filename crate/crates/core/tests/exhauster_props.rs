mod common;

use common::{corpus, grid, Rng};
use wsharp_core::exhauster::{hadamard_lower, LowerExhauster, Schedule};
use wsharp_core::qdcalc::{dir_derivative, quasidiff};
use wsharp_core::sampling::expr_fn;
use wsharp_core::{Polytope, Vector};

#[test]
fn minmax_exhauster_reproduces_the_function() {
    let mut rng = Rng::new(3);
    for _ in 0..50 {
        let rows: Vec<Vec<Vector>> = (0..1 + rng.below(4))
            .map(|_| (0..1 + rng.below(5)).map(|_| Vector::new(vec![rng.range(-2.0, 2.0), rng.range(-2.0, 2.0)]).unwrap()).collect())
            .collect();
        let e = LowerExhauster::from_minmax(&rows).unwrap();
        for _ in 0..20 {
            let v = rng.direction(2);
            let direct = rows
                .iter()
                .map(|r| r.iter().map(|a| a.as_slice()[0] * v[0] + a.as_slice()[1] * v[1]).fold(f64::NEG_INFINITY, f64::max))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(e.eval(&v).unwrap(), direct);
        }
    }
}

#[test]
fn symbolic_exhauster_matches_directional_derivative() {
    let mut rng = Rng::new(8);
    for case in corpus() {
        for x in grid(&case.bounds, if case.bounds.len() == 1 { 21 } else { 7 }) {
            let e = LowerExhauster::from_expr(&case.f, &x).unwrap();
            let q = quasidiff(&case.f, &x).unwrap();
            for _ in 0..10 {
                let v = rng.direction(x.len());
                let a = e.eval(&v).unwrap();
                let b = dir_derivative(&q, &v).unwrap();
                assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()), "{} at {x:?}: {a} vs {b}", case.name);
            }
        }
    }
}

#[test]
fn hadamard_lower_matches_ray_derivative_for_lipschitz_functions() {
    let mut rng = Rng::new(21);
    let schedule = Schedule::default();
    for case in corpus().into_iter().filter(|c| c.lipschitz) {
        let f = expr_fn(&case.f);
        for x in grid(&case.bounds, if case.bounds.len() == 1 { 9 } else { 5 }) {
            let q = quasidiff(&case.f, &x).unwrap();
            if q.approx {
                continue;
            }
            for _ in 0..4 {
                let v = rng.direction(x.len());
                let d = dir_derivative(&q, &v).unwrap();
                let h = hadamard_lower(&f, &x, &v, &schedule).unwrap().value;
                assert!((h - d).abs() <= 1e-4 * (1.0 + d.abs()), "{} at {x:?} along {v:?}: {h} vs {d}", case.name);
            }
        }
    }
}

#[test]
fn norm_vanishes_exactly_when_every_member_holds_the_origin() {
    let square = Polytope::cube(2, 1.0);
    let off = Polytope::from_rows(&[&[2.0, 0.0], &[3.0, 1.0]]).unwrap();
    assert!(LowerExhauster::new(vec![square.clone(), square.scale(0.5).unwrap()]).unwrap().norm().unwrap() <= 1e-10);
    let n = LowerExhauster::new(vec![square, off]).unwrap().norm().unwrap();
    assert!((n - 2.0).abs() < 1e-10);
}
