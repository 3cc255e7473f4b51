//! Numerical limit estimators: Hadamard lower/upper derivatives and the
//! strong slope.
//!
//! Functions are passed as plain closures; a non-finite return value means
//! "undefined here" and the sample is dropped. All estimators walk the scales
//! `t_k = 2^-k`, `k = k_min..=k_max`, and within a scale use `samples` step
//! lengths `t_k (1 + j/4)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::unit_directions;
use crate::qdcalc::FuncExpr;

/// Quotients beyond this magnitude are reported as an infinite sentinel.
pub const BLOWUP: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub k_min: u32,
    pub k_max: u32,
    pub samples: usize,
    /// Direction perturbation radius relative to `t_k`.
    pub delta_ratio: f64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { k_min: 6, k_max: 18, samples: 5, delta_ratio: 1.0 / 16.0 }
    }
}

impl Schedule {
    fn validate(&self) -> Result<()> {
        if self.k_min > self.k_max || self.k_max > 50 || self.samples == 0 || !(self.delta_ratio >= 0.0) {
            return Err(Error::InvalidArgument(alloc::format!("bad schedule {self:?}")));
        }
        Ok(())
    }

    fn scale(k: u32) -> f64 {
        libm::ldexp(1.0, -(k as i32))
    }

    fn steps(&self, k: u32) -> impl Iterator<Item = f64> + '_ {
        let tk = Self::scale(k);
        (0..self.samples).map(move |j| tk * (1.0 + j as f64 / 4.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    /// The estimate; `±inf` flags quotients that blow up.
    pub value: f64,
    /// Extreme quotient per scale, coarsest first.
    pub per_scale: Vec<f64>,
}

/// Wraps an expression as a closure returning NaN outside its domain.
pub fn expr_fn(e: &FuncExpr) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    move |x| e.evaluate(x).unwrap_or(f64::NAN)
}

/// Eight fixed perturbation directions for `v' = v + δu`.
fn stencil8(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => [1.0, -1.0, 0.75, -0.75, 0.5, -0.5, 0.25, -0.25].iter().map(|&s| alloc::vec![s]).collect(),
        _ => (0..8)
            .map(|k| {
                let mut u = alloc::vec![0.0; dim];
                let t = core::f64::consts::FRAC_PI_4 * k as f64;
                // Rotate the compass through successive coordinate planes.
                let i = (k / 2) % (dim - 1);
                u[i] = libm::cos(t);
                u[i + 1] = libm::sin(t);
                u
            })
            .collect(),
    }
}

fn base_value<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> Result<f64> {
    let fx = f(x);
    if fx.is_finite() {
        Ok(fx)
    } else {
        Err(Error::NonFinite("function value at the base point"))
    }
}

fn sentinel(m: f64) -> f64 {
    if m > BLOWUP {
        f64::INFINITY
    } else if m < -BLOWUP {
        f64::NEG_INFINITY
    } else {
        m
    }
}

fn hadamard<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], v: &[f64], schedule: &Schedule, lower: bool) -> Result<Estimate> {
    schedule.validate()?;
    crate::error::check_dim(x.len(), v.len())?;
    let fx = base_value(f, x)?;
    let stencil = stencil8(x.len());
    let mut per_scale = Vec::new();
    let mut y = alloc::vec![0.0; x.len()];
    for k in schedule.k_min..=schedule.k_max {
        let delta = Schedule::scale(k) * schedule.delta_ratio;
        let mut best = if lower { f64::INFINITY } else { f64::NEG_INFINITY };
        let mut any = false;
        for t in schedule.steps(k) {
            for u in core::iter::once(None).chain(stencil.iter().map(Some)) {
                for i in 0..x.len() {
                    let vi = v[i] + u.map_or(0.0, |u| delta * u[i]);
                    y[i] = x[i] + t * vi;
                }
                let q = (f(&y) - fx) / t;
                if q.is_nan() {
                    continue;
                }
                any = true;
                best = if lower { best.min(q) } else { best.max(q) };
            }
        }
        per_scale.push(if any { best } else { f64::NAN });
    }
    tail_value(per_scale)
}

/// The estimate is the finest scale with a defined value; a geometric
/// blow-up across scales maps to the infinite sentinel.
fn tail_value(per_scale: Vec<f64>) -> Result<Estimate> {
    let defined: Vec<f64> = per_scale.iter().copied().filter(|q| !q.is_nan()).collect();
    let last = *defined.last().ok_or(Error::NonFinite("all difference quotients undefined"))?;
    let mut value = sentinel(last);
    if value.is_finite() && defined.len() >= 3 {
        // Quotients that double with every halving of t signal a jump.
        let n = defined.len();
        let (a, b, c) = (defined[n - 3], defined[n - 2], defined[n - 1]);
        if c.abs() > 1e3 && (b / a) > 1.8 && (c / b) > 1.8 {
            value = if c > 0.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        }
    }
    Ok(Estimate { value, per_scale })
}

/// Hadamard lower derivative `d⁻f(x; v)`: per scale the smallest quotient
/// over the step lengths and the perturbed directions.
pub fn hadamard_lower<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], v: &[f64], schedule: &Schedule) -> Result<Estimate> {
    hadamard(f, x, v, schedule, true)
}

/// Hadamard upper derivative `d⁺f(x; v)`.
pub fn hadamard_upper<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], v: &[f64], schedule: &Schedule) -> Result<Estimate> {
    hadamard(f, x, v, schedule, false)
}

/// Number of scales (finest first) used by the strong slope.
const SLOPE_SCALES: u32 = 3;

fn slope_directions(dim: usize) -> Vec<Vec<f64>> {
    match dim {
        1 => alloc::vec![alloc::vec![1.0], alloc::vec![-1.0]],
        2 => (0..64)
            .map(|k| {
                let t = core::f64::consts::PI * k as f64 / 32.0;
                alloc::vec![libm::cos(t), libm::sin(t)]
            })
            .collect(),
        _ => {
            let mut out = Vec::new();
            for i in 0..dim {
                for s in [1.0, -1.0] {
                    let mut u = alloc::vec![0.0; dim];
                    u[i] = s;
                    out.push(u);
                }
            }
            out.extend(unit_directions(dim, 64 * dim, 0x5EED).into_iter().map(|v| v.into_inner()));
            out
        }
    }
}

fn normalize(u: &mut [f64]) {
    let n = crate::linalg::norm(u);
    if n > 0.0 {
        u.iter_mut().for_each(|c| *c /= n);
    }
}

/// Strong slope `|∇f|(x)`: largest normalized decrease `(f(x) - f(y)) / |x - y|`
/// over shrinking spheres around `x`.
///
/// Per scale the decrease is maximized over a direction stencil (both signs
/// in 1D, 64 angles in 2D, axes plus a seeded set above) and, at the finest
/// scale, refined by a pattern search on the sphere. Returns exactly 0 when
/// no sampled point decreases `f` at the two finest scales.
pub fn strong_slope<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], schedule: &Schedule) -> Result<Estimate> {
    schedule.validate()?;
    let fx = base_value(f, x)?;
    let dim = x.len();
    let floor = 4.0 * f64::EPSILON * (1.0 + fx.abs());
    let dirs = slope_directions(dim);
    let k_lo = schedule.k_max.saturating_sub(SLOPE_SCALES - 1).max(schedule.k_min);
    let mut y = alloc::vec![0.0; dim];
    let quotient = |u: &[f64], t: f64, y: &mut [f64]| {
        for i in 0..dim {
            y[i] = x[i] + t * u[i];
        }
        let drop = fx - f(y);
        if drop.is_nan() {
            f64::NAN
        } else if drop > floor {
            drop / t
        } else {
            0.0
        }
    };
    let mut per_scale = Vec::new();
    let mut best_dir = 0;
    for k in k_lo..=schedule.k_max {
        let mut best = 0.0_f64;
        for t in schedule.steps(k) {
            for (di, u) in dirs.iter().enumerate() {
                let q = quotient(u, t, &mut y);
                if q > best {
                    best = q;
                    if k == schedule.k_max {
                        best_dir = di;
                    }
                }
            }
        }
        per_scale.push(best);
    }
    let n = per_scale.len();
    if per_scale[n - 1] == 0.0 && (n < 2 || per_scale[n - 2] == 0.0) {
        return Ok(Estimate { value: 0.0, per_scale });
    }
    let t = Schedule::scale(schedule.k_max);
    let mut value = per_scale[n - 1];
    if dim > 1 {
        let mut u = dirs[best_dir].clone();
        let mut q = quotient(&u, t, &mut y);
        let mut step = if dim == 2 { core::f64::consts::PI / 32.0 } else { 0.25 };
        while step > 1e-9 {
            let mut moved = false;
            for i in 0..dim {
                for s in [step, -step] {
                    let mut w = u.clone();
                    w[i] += s;
                    normalize(&mut w);
                    let qw = quotient(&w, t, &mut y);
                    if qw > q {
                        q = qw;
                        u = w;
                        moved = true;
                    }
                }
            }
            if !moved {
                step *= 0.5;
            }
        }
        value = value.max(q);
    }
    let mut est = tail_value(per_scale)?;
    est.value = sentinel(value).max(est.value);
    Ok(est)
}
