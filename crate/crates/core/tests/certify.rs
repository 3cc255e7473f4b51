use wsharp_core::certify::{
    certify_constrained, certify_constrained_exhauster, certify_exhauster, certify_qd, check_error_bound,
    estimate_lipschitz, wsharp_check, Constraints, ExhausterSource, HalfSpace, ProblemInstance, Verdict,
};
use wsharp_core::FuncExpr;

fn lin(a: &[f64], b: f64) -> FuncExpr {
    FuncExpr::affine(a, b).unwrap()
}

fn abs1() -> FuncExpr {
    lin(&[1.0], 0.0).abs()
}

/// 0 for x <= 0, x + 1/(x + 1) for x > 0.
fn jump_example() -> FuncExpr {
    FuncExpr::Piecewise {
        a: wsharp_core::Vector::from_slice(&[1.0]).unwrap(),
        b: 0.0,
        below: Box::new(lin(&[0.0], 0.0)),
        above: Box::new(FuncExpr::Sum(vec![
            lin(&[1.0], 0.0),
            FuncExpr::InvAffine { a: wsharp_core::Vector::from_slice(&[1.0]).unwrap(), b: 1.0, c: 1.0 },
        ])),
    }
}

#[test]
fn abs_is_certified_with_unit_modulus() {
    let p = ProblemInstance::new(abs1(), vec![(-2.0, 2.0)], 401);
    let r = certify_qd(&p).unwrap();
    assert_eq!(r.verdict, Verdict::CertifiedEmpirical, "{}", r.summary);
    assert!((r.tau_sharp().unwrap() - 1.0).abs() < 1e-12);
    assert!(r.violations().is_empty());
}

#[test]
fn square_is_refuted() {
    let x2 = FuncExpr::Poly(
        wsharp_core::qdcalc::Polynomial::new(1, vec![wsharp_core::qdcalc::Monomial { coef: 1.0, powers: vec![2] }])
            .unwrap(),
    );
    let p = ProblemInstance::new(x2, vec![(-1.0, 1.0)], 201);
    let r = certify_qd(&p).unwrap();
    assert_eq!(r.verdict, Verdict::RefutedOnGrid, "{}", r.summary);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn jump_example_condition_fails_but_property_holds() {
    let p = ProblemInstance::new(jump_example(), vec![(-5.0, 5.0)], 2001);
    let r = wsharp_check(&p, 1.0).unwrap();
    assert_eq!(r.verdict, Verdict::CertifiedEmpirical, "{}", r.summary);
    let r = certify_qd(&p).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive, "{}", r.summary);
    assert!(r.condition_holds == Some(false));
    let refined = r.probe.as_ref().and_then(|p| p.condition).unwrap();
    assert!(refined.min(r.tau_sound().unwrap()) < 0.05);
    assert!(r.summary.contains("property holds"), "{}", r.summary);
}

/// Distance from the origin to the hull of at most three planar points, by
/// enumerating vertices, edges and the triangle interior.
fn hull_distance(pts: &[[f64; 2]]) -> f64 {
    let mut best = pts.iter().map(|p| p[0].hypot(p[1])).fold(f64::INFINITY, f64::min);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let (a, b) = (pts[i], pts[j]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let t = (-(a[0] * d[0] + a[1] * d[1]) / (d[0] * d[0] + d[1] * d[1])).clamp(0.0, 1.0);
            best = best.min((a[0] + t * d[0]).hypot(a[1] + t * d[1]));
        }
    }
    if pts.len() == 3 {
        let cross = |a: [f64; 2], b: [f64; 2]| (b[0] - a[0]) * (0.0 - a[1]) - (b[1] - a[1]) * (0.0 - a[0]);
        let s = [cross(pts[0], pts[1]), cross(pts[1], pts[2]), cross(pts[2], pts[0])];
        if s.iter().all(|&c| c >= 0.0) || s.iter().all(|&c| c <= 0.0) {
            best = 0.0;
        }
    }
    best
}

#[test]
fn max_of_affine_modulus_matches_gradient_table() {
    let grads = [[1.0, 1.0], [1.0, -1.0], [-2.0, 0.0]];
    let f = FuncExpr::Max(grads.iter().map(|g| lin(g, 0.0)).collect());
    let p = ProblemInstance::new(f, vec![(-1.0, 1.0), (-1.0, 1.0)], 21);
    let r = certify_qd(&p).unwrap();
    let mut expected = f64::INFINITY;
    for i in 0..21 {
        for j in 0..21 {
            let x = [-1.0 + 0.1 * i as f64, -1.0 + 0.1 * j as f64];
            if x[0].abs() < 1e-9 && x[1].abs() < 1e-9 {
                continue;
            }
            let vals: Vec<f64> = grads.iter().map(|g| g[0] * x[0] + g[1] * x[1]).collect();
            let m = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let active: Vec<[f64; 2]> =
                grads.iter().zip(&vals).filter(|(_, &v)| v >= m - 1e-9 * (1.0 + m.abs())).map(|(g, _)| *g).collect();
            expected = expected.min(hull_distance(&active));
        }
    }
    assert!((r.tau_sharp().unwrap() - expected).abs() < 1e-8, "{:?} vs {expected}", r.tau);
    assert_eq!(r.verdict, Verdict::CertifiedEmpirical, "{}", r.summary);
}

#[test]
fn constrained_l1_with_halfplane() {
    let f = FuncExpr::Sum(vec![lin(&[1.0, 0.0], 0.0).abs(), lin(&[0.0, 1.0], 0.0).abs()]);
    let p = ProblemInstance::new(f, vec![(-2.0, 2.0), (-2.0, 2.0)], 41)
        .with_constraints(Constraints::Functional { g: Some(lin(&[1.0, 0.0], -1.0)), h: None });
    let r = certify_constrained(&p).unwrap();
    let tau = r.tau.as_ref().unwrap();
    assert!((tau.sharp_inner - 1.0).abs() < 1e-12 && (tau.sound_outer - 1.0).abs() < 1e-12);
    let zeta = r.zeta.as_ref().unwrap();
    assert!(zeta.sound_outer > 0.0 && zeta.sound_outer.is_finite());
    assert_eq!(r.verdict, Verdict::CertifiedEmpirical, "{}", r.summary);
    assert_eq!(r.check.as_ref().unwrap().violation_count, 0);
    let pen = r.penalty.as_ref().unwrap();
    assert!(pen.argmin_consistent);
    assert!((pen.lipschitz - 2f64.sqrt()).abs() < 1e-12);
}

#[test]
fn lambda_at_lipschitz_rank_is_rejected() {
    let mut p = ProblemInstance::new(abs1(), vec![(-2.0, 2.0)], 41)
        .with_constraints(Constraints::Functional { g: Some(lin(&[1.0], -1.0)), h: None });
    assert!((estimate_lipschitz(&p).unwrap() - 1.0).abs() < 1e-12);
    p.lambda = Some(1.0);
    assert!(certify_constrained(&p).is_err());
}

#[test]
fn exhauster_of_distance_to_unit_sphere() {
    let f = abs1().scaled(1.0);
    let f = FuncExpr::Sum(vec![f, lin(&[0.0], -1.0)]).abs();
    let p = ProblemInstance::new(f, vec![(-3.0, 3.0)], 1201);
    let r = certify_exhauster(&p, &ExhausterSource::Symbolic).unwrap();
    assert!((r.tau_sharp().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(r.verdict, Verdict::CertifiedEmpirical, "{}", r.summary);
    assert_eq!(r.exhauster.as_ref().unwrap().hadamard_mismatches, 0);
}

#[test]
fn missing_exhauster_is_inconclusive() {
    let p = ProblemInstance::new(abs1(), vec![(-1.0, 1.0)], 5);
    let r = certify_exhauster(&p, &ExhausterSource::PerPoint(vec![])).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
    assert_eq!(r.exhauster.unwrap().missing.len(), 4);
}

#[test]
fn constrained_exhauster_on_halfline() {
    // f = |x| on x >= 1: argmin {1}; away from it the exhauster {1} gives zeta 1.
    let p = ProblemInstance::new(abs1(), vec![(-2.0, 3.0)], 51)
        .with_constraints(Constraints::Polyhedral(vec![HalfSpace::new(&[-1.0], -1.0).unwrap()]));
    let r = certify_constrained_exhauster(&p, &ExhausterSource::Symbolic).unwrap();
    assert!((r.zeta.as_ref().unwrap().sharp_inner - 1.0).abs() < 1e-9, "{:?}", r.zeta);
    assert_eq!(r.verdict, Verdict::CertifiedEmpirical, "{}", r.summary);
}

#[test]
fn error_bound_for_abs_minus_one() {
    // Level set [-1, 1] and dist(x, [-1, 1]) = [|x| - 1]_+.
    let g = FuncExpr::Sum(vec![abs1(), lin(&[0.0], -1.0)]);
    let p = ProblemInstance::new(g, vec![(-3.0, 3.0)], 61);
    let r = check_error_bound(&p, 0.0, 0.0, Some(1.0)).unwrap();
    assert_eq!(r.verdict, Verdict::CertifiedEmpirical, "{}", r.summary);
    let eb = r.error_bound.unwrap();
    assert!((eb.tau_hat.unwrap() - 1.0).abs() < 1e-9);
    assert!(eb.level_points >= 19 && eb.level_points + eb.edge_points >= 21);
}

#[test]
fn error_bound_recovers_gradient_norm() {
    // g = 3x - 4y: distance to the half-plane times |a| = 5 is the residual.
    let g = lin(&[3.0, -4.0], 0.0);
    let p = ProblemInstance::new(g, vec![(-1.0, 1.0), (-1.0, 1.0)], 21)
        .with_constraints(Constraints::Functional { g: Some(lin(&[3.0, -4.0], 0.0)), h: None });
    let r = check_error_bound(&p, 0.0, 0.0, None).unwrap();
    let eb = r.error_bound.unwrap();
    // Distances to a sampled level set can only be too large, so every
    // ratio stays at or below |a| = 5 and the best ones come close to it.
    let t = eb.tau_hat.unwrap();
    assert!(t <= 5.0 + 1e-9 && t > 3.0, "{t}");
    let sup = eb.sup_ratio.unwrap();
    assert!(sup <= 5.0 + 1e-9 && sup > 4.9, "{sup}");
    assert!(check_error_bound(&p, -100.0, 0.0, None).is_err());
}

#[test]
fn fixed_point_residual() {
    // |x - F(x)| with F(x) = 0.5 x + 1.
    let phi = lin(&[0.5], -1.0).abs();
    let p = ProblemInstance::new(phi, vec![(-10.0, 10.0)], 2001);
    let r = wsharp_check(&p, 0.5).unwrap();
    assert_eq!(r.verdict, Verdict::CertifiedEmpirical, "{}", r.summary);
}
