use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::geometry::Vector;
use crate::linalg::dot;

/// One term `coef * x_0^p_0 * ... * x_{n-1}^p_{n-1}` of a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub powers: Vec<u32>,
}

/// Multivariate polynomial given by its coefficient table.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    dim: usize,
    terms: Vec<Monomial>,
}

fn powi(x: f64, p: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..p {
        acc *= x;
    }
    acc
}

impl Polynomial {
    pub fn new(dim: usize, terms: Vec<Monomial>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty("polynomial dimension"));
        }
        for t in &terms {
            check_dim(dim, t.powers.len())?;
            if !t.coef.is_finite() {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
        }
        Ok(Polynomial { dim, terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        Ok(self
            .terms
            .iter()
            .map(|t| t.coef * t.powers.iter().zip(x).map(|(&p, &xi)| powi(xi, p)).product::<f64>())
            .sum())
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vector> {
        check_dim(self.dim, x.len())?;
        let mut g = alloc::vec![0.0; self.dim];
        for t in &self.terms {
            for (k, gk) in g.iter_mut().enumerate() {
                let pk = t.powers[k];
                if pk == 0 {
                    continue;
                }
                let mut term = t.coef * pk as f64;
                for (i, (&p, &xi)) in t.powers.iter().zip(x).enumerate() {
                    term *= if i == k { powi(xi, p - 1) } else { powi(xi, p) };
                }
                *gk += term;
            }
        }
        Vector::new(g)
    }
}

/// Expression tree defining an objective or constraint function on `R^n`.
///
/// Atoms are affine maps, the Euclidean distance to a center, polynomials,
/// the reciprocal `c / (<a,x> + b)` (defined where the denominator is
/// positive), and a two-way split along a hyperplane. Combinators are sums,
/// scalar multiples, negation, pointwise max and min, positive part and
/// absolute value.
#[derive(Debug, Clone, PartialEq)]
pub enum FuncExpr {
    Affine { a: Vector, b: f64 },
    Norm2 { center: Vector },
    Poly(Polynomial),
    InvAffine { a: Vector, b: f64, c: f64 },
    /// `below` where `<a,x> + b <= 0`, `above` elsewhere.
    Piecewise { a: Vector, b: f64, below: Box<FuncExpr>, above: Box<FuncExpr> },
    Sum(Vec<FuncExpr>),
    Scale(f64, Box<FuncExpr>),
    Neg(Box<FuncExpr>),
    Max(Vec<FuncExpr>),
    Min(Vec<FuncExpr>),
    PosPart(Box<FuncExpr>),
    Abs(Box<FuncExpr>),
}

impl FuncExpr {
    pub fn affine(a: &[f64], b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::NonFinite("affine offset"));
        }
        Ok(FuncExpr::Affine { a: Vector::from_slice(a)?, b })
    }

    /// `|x|` in the Euclidean norm.
    pub fn norm2(dim: usize) -> Self {
        FuncExpr::Norm2 { center: Vector::zeros(dim) }
    }

    pub fn abs(self) -> Self {
        FuncExpr::Abs(Box::new(self))
    }

    pub fn pos_part(self) -> Self {
        FuncExpr::PosPart(Box::new(self))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        FuncExpr::Neg(Box::new(self))
    }

    pub fn scaled(self, alpha: f64) -> Self {
        FuncExpr::Scale(alpha, Box::new(self))
    }

    /// Ambient dimension, after checking that all atoms agree on it.
    pub fn dim(&self) -> Result<usize> {
        match self {
            FuncExpr::Affine { a, b } => {
                if !b.is_finite() {
                    return Err(Error::NonFinite("affine offset"));
                }
                Ok(a.dim())
            }
            FuncExpr::Norm2 { center } => Ok(center.dim()),
            FuncExpr::Poly(p) => Ok(p.dim()),
            FuncExpr::InvAffine { a, b, c } => {
                if !b.is_finite() || !c.is_finite() {
                    return Err(Error::NonFinite("reciprocal coefficients"));
                }
                Ok(a.dim())
            }
            FuncExpr::Piecewise { a, b, below, above } => {
                if !b.is_finite() {
                    return Err(Error::NonFinite("piecewise offset"));
                }
                let d = a.dim();
                check_dim(d, below.dim()?)?;
                check_dim(d, above.dim()?)?;
                Ok(d)
            }
            FuncExpr::Sum(xs) | FuncExpr::Max(xs) | FuncExpr::Min(xs) => {
                let first = xs.first().ok_or(Error::Empty("combinator argument list"))?.dim()?;
                for x in &xs[1..] {
                    check_dim(first, x.dim()?)?;
                }
                Ok(first)
            }
            FuncExpr::Scale(alpha, x) => {
                if !alpha.is_finite() {
                    return Err(Error::NonFinite("scale factor"));
                }
                x.dim()
            }
            FuncExpr::Neg(x) | FuncExpr::PosPart(x) | FuncExpr::Abs(x) => x.dim(),
        }
    }

    /// Exact value at `x`.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok(match self {
            FuncExpr::Affine { a, b } => a.dot(x)? + b,
            FuncExpr::Norm2 { center } => {
                check_dim(center.dim(), x.len())?;
                libm::sqrt(center.as_slice().iter().zip(x).map(|(c, xi)| (xi - c) * (xi - c)).sum())
            }
            FuncExpr::Poly(p) => p.eval(x)?,
            FuncExpr::InvAffine { a, b, c } => {
                let den = a.dot(x)? + b;
                if !(den > 0.0) {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "reciprocal evaluated outside its domain (denominator {den})"
                    )));
                }
                c / den
            }
            FuncExpr::Piecewise { a, b, below, above } => {
                if a.dot(x)? + b <= 0.0 {
                    below.evaluate(x)?
                } else {
                    above.evaluate(x)?
                }
            }
            FuncExpr::Sum(xs) => {
                let mut acc = 0.0;
                for e in xs {
                    acc += e.evaluate(x)?;
                }
                acc
            }
            FuncExpr::Scale(alpha, e) => alpha * e.evaluate(x)?,
            FuncExpr::Neg(e) => -e.evaluate(x)?,
            FuncExpr::Max(xs) => fold_values(xs, x, f64::max)?,
            FuncExpr::Min(xs) => fold_values(xs, x, f64::min)?,
            FuncExpr::PosPart(e) => e.evaluate(x)?.max(0.0),
            FuncExpr::Abs(e) => e.evaluate(x)?.abs(),
        })
    }

    /// Gradient of a smooth atom, `None` for anything else.
    pub(crate) fn smooth_gradient(&self, x: &[f64]) -> Option<Result<Vector>> {
        match self {
            FuncExpr::Affine { a, .. } => Some(Ok(a.clone())),
            FuncExpr::Poly(p) => Some(p.gradient(x)),
            FuncExpr::InvAffine { a, b, c } => Some(a.dot(x).and_then(|ax| {
                let den = ax + b;
                if !(den > 0.0) {
                    return Err(Error::InvalidArgument(alloc::format!(
                        "reciprocal evaluated outside its domain (denominator {den})"
                    )));
                }
                Ok(a.scale(-c / (den * den)))
            })),
            _ => None,
        }
    }
}

fn fold_values(xs: &[FuncExpr], x: &[f64], f: fn(f64, f64) -> f64) -> Result<f64> {
    let mut it = xs.iter();
    let first = it.next().ok_or(Error::Empty("combinator argument list"))?.evaluate(x)?;
    it.try_fold(first, |acc, e| Ok(f(acc, e.evaluate(x)?)))
}

pub(crate) fn linear_part(a: &Vector, b: f64, x: &[f64]) -> Result<f64> {
    check_dim(a.dim(), x.len())?;
    Ok(dot(a.as_slice(), x) + b)
}
