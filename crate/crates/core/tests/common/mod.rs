//! Seeded random polytopes and a corpus of expression-defined functions
//! shared by the integration tests.

#![allow(dead_code)]

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use wsharp_core::qdcalc::{Monomial, Polynomial};
use wsharp_core::{FuncExpr, Polytope, Vector};

pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Rng {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    pub fn direction(&mut self, dim: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..dim).map(|_| self.range(-1.0, 1.0)).collect();
            let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if n > 1e-3 && n <= 1.0 {
                return v.into_iter().map(|a| a / n).collect();
            }
        }
    }
}

/// Random planar polytope with 1 to `max_vertices` vertices around a random center.
pub fn polygon(rng: &mut Rng, max_vertices: usize) -> Polytope {
    let n = 1 + rng.below(max_vertices);
    let (cx, cy) = (rng.range(-1.0, 1.0), rng.range(-1.0, 1.0));
    let r = rng.range(0.2, 2.0);
    let vs = (0..n)
        .map(|_| Vector::new(vec![cx + r * rng.range(-1.0, 1.0), cy + r * rng.range(-1.0, 1.0)]).unwrap())
        .collect();
    Polytope::new(vs).unwrap()
}

/// `count` seeded pairs of random planar polytopes with at most 12 vertices.
pub fn polygon_pairs(count: usize, seed: u64) -> Vec<(Polytope, Polytope)> {
    let mut rng = Rng::new(seed);
    (0..count).map(|_| (polygon(&mut rng, 12), polygon(&mut rng, 12))).collect()
}

pub fn interval(rng: &mut Rng) -> Polytope {
    let a = rng.range(-3.0, 3.0);
    let b = rng.range(-3.0, 3.0);
    Polytope::interval(a.min(b), a.max(b)).unwrap()
}

pub fn lin(a: &[f64], b: f64) -> FuncExpr {
    FuncExpr::affine(a, b).unwrap()
}

pub fn poly(dim: usize, terms: &[(f64, &[u32])]) -> FuncExpr {
    let terms = terms.iter().map(|(c, p)| Monomial { coef: *c, powers: p.to_vec() }).collect();
    FuncExpr::Poly(Polynomial::new(dim, terms).unwrap())
}

/// 0 for x <= 0 and x + 1/(x + 1) for x > 0.
pub fn jump_example() -> FuncExpr {
    FuncExpr::Piecewise {
        a: Vector::from_slice(&[1.0]).unwrap(),
        b: 0.0,
        below: Box::new(lin(&[0.0], 0.0)),
        above: Box::new(FuncExpr::Sum(vec![
            lin(&[1.0], 0.0),
            FuncExpr::InvAffine { a: Vector::from_slice(&[1.0]).unwrap(), b: 1.0, c: 1.0 },
        ])),
    }
}

pub struct Case {
    pub name: &'static str,
    pub f: FuncExpr,
    pub bounds: Vec<(f64, f64)>,
    /// Locally Lipschitz on the box.
    pub lipschitz: bool,
}

fn case(name: &'static str, f: FuncExpr, bounds: Vec<(f64, f64)>) -> Case {
    Case { name, f, bounds, lipschitz: true }
}

/// Expression-defined functions on `R^1` and `R^2`.
pub fn corpus() -> Vec<Case> {
    let x = || lin(&[1.0], 0.0);
    let x2 = |a: f64, b: f64, c: f64| lin(&[a, b], c);
    let b1 = vec![(-2.0, 2.0)];
    let b2 = vec![(-2.0, 2.0), (-2.0, 2.0)];
    vec![
        case("abs", x().abs(), b1.clone()),
        case("abs_shifted", lin(&[1.0], -0.5).abs(), b1.clone()),
        case("dist_to_sphere", FuncExpr::Sum(vec![x().abs(), lin(&[0.0], -1.0)]).abs(), vec![(-3.0, 3.0)]),
        case("pospart_plus_abs", FuncExpr::Sum(vec![x().pos_part(), x().abs().scaled(0.5)]), b1.clone()),
        case("max_of_three", FuncExpr::Max(vec![x(), lin(&[-2.0], 0.0), lin(&[0.5], 1.0)]), b1.clone()),
        case("min_of_cones", FuncExpr::Min(vec![lin(&[1.0], -1.0).abs(), lin(&[1.0], 1.0).abs()]), b1.clone()),
        case("abs_difference", FuncExpr::Sum(vec![x().abs().scaled(2.0), lin(&[1.0], -1.0).abs().neg()]), b1.clone()),
        case("square", poly(1, &[(1.0, &[2])]), b1.clone()),
        case("cubic", poly(1, &[(1.0, &[3]), (-1.0, &[1])]), b1.clone()),
        Case { name: "jump", f: jump_example(), bounds: vec![(-5.0, 5.0)], lipschitz: false },
        case("fixed_point_residual", lin(&[0.5], -1.0).abs(), vec![(-10.0, 10.0)]),
        case("abs_plus_square", FuncExpr::Sum(vec![x().abs(), poly(1, &[(1.0, &[2])])]), b1),
        case("l1", FuncExpr::Sum(vec![x2(1.0, 0.0, 0.0).abs(), x2(0.0, 1.0, 0.0).abs()]), b2.clone()),
        case("linf", FuncExpr::Max(vec![x2(1.0, 0.0, 0.0).abs(), x2(0.0, 1.0, 0.0).abs()]), b2.clone()),
        case("euclidean", FuncExpr::norm2(2), b2.clone()),
        case(
            "max_affine",
            FuncExpr::Max(vec![x2(1.0, 1.0, 0.0), x2(1.0, -1.0, 0.0), x2(-2.0, 0.0, 0.0)]),
            b2.clone(),
        ),
        case(
            "min_of_l1_cones",
            FuncExpr::Min(vec![
                FuncExpr::Sum(vec![x2(1.0, 0.0, -1.0).abs(), x2(0.0, 1.0, 0.0).abs()]),
                FuncExpr::Sum(vec![x2(1.0, 0.0, 1.0).abs(), x2(0.0, 1.0, 0.0).abs()]),
            ]),
            b2.clone(),
        ),
        case(
            "dc_kinks",
            FuncExpr::Sum(vec![
                x2(1.0, 0.0, 0.0).abs().scaled(2.0),
                x2(0.0, 1.0, 0.0).abs().scaled(2.0),
                x2(1.0, 1.0, 0.0).abs().neg(),
            ]),
            b2.clone(),
        ),
        case("paraboloid", poly(2, &[(1.0, &[2, 0]), (1.0, &[0, 2])]), b2.clone()),
        case(
            "piecewise_plane",
            FuncExpr::Piecewise {
                a: Vector::from_slice(&[1.0, 1.0]).unwrap(),
                b: 0.0,
                below: Box::new(x2(1.0, -1.0, 0.0).abs()),
                above: Box::new(FuncExpr::Sum(vec![x2(1.0, -1.0, 0.0).abs(), x2(1.0, 1.0, 0.0)])),
            },
            b2.clone(),
        ),
        case(
            "pospart_plane",
            FuncExpr::Sum(vec![x2(1.0, 1.0, -1.0).pos_part(), x2(1.0, -1.0, 0.0).abs()]),
            b2.clone(),
        ),
        case("abs_of_poly", FuncExpr::Sum(vec![poly(2, &[(1.0, &[2, 0]), (-1.0, &[0, 1])])]).abs(), b2.clone()),
        case(
            "neg_min",
            FuncExpr::Sum(vec![FuncExpr::Min(vec![x2(1.0, 0.0, 0.0), x2(0.0, 1.0, 0.0)]).neg(), x2(1.0, 0.0, 0.0).abs().scaled(2.0)]),
            b2,
        ),
    ]
}

/// Grid points of a box with `n` points per axis.
pub fn grid(bounds: &[(f64, f64)], n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in bounds {
        let axis: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        out = out.into_iter().flat_map(|p| axis.iter().map(move |&a| {
            let mut q = p.clone();
            q.push(a);
            q
        })).collect();
    }
    out
}
