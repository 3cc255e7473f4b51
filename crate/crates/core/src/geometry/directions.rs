//! Deterministic direction sets on the unit sphere.
//!
//! Circle: equally spaced angles with a seeded rotation. Higher dimensions:
//! a Cranley-Patterson rotated Halton sequence pushed through Box-Muller and
//! normalized. Same `(dim, count, seed)` always yields the same list.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::Vector;

pub const DEFAULT_DIRECTION_COUNT: usize = 4096;
pub const DEFAULT_SEED: u64 = 0x5EED;

const PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

pub(crate) fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// `count` unit vectors in `R^dim`. In one dimension only `+1` and `-1` exist.
pub fn unit_directions(dim: usize, count: usize, seed: u64) -> Vec<Vector> {
    assert!(dim > 0);
    match dim {
        1 => alloc::vec![Vector::from_raw(alloc::vec![1.0]), Vector::from_raw(alloc::vec![-1.0])],
        2 => circle(count, seed),
        _ => sphere(dim, count, seed),
    }
}

fn circle(count: usize, seed: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift = unit_f64(&mut rng);
    let tau = 2.0 * core::f64::consts::PI;
    (0..count)
        .map(|i| {
            let theta = tau * (i as f64 + shift) / count as f64;
            Vector::from_raw(alloc::vec![libm::cos(theta), libm::sin(theta)])
        })
        .collect()
}

fn sphere(dim: usize, count: usize, seed: u64) -> Vec<Vector> {
    assert!(dim <= PRIMES.len(), "direction sets support up to {} dimensions", PRIMES.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = dim.div_ceil(2);
    let shifts: Vec<f64> = (0..2 * pairs).map(|_| unit_f64(&mut rng)).collect();
    let tau = 2.0 * core::f64::consts::PI;
    let mut out = Vec::with_capacity(count);
    let mut index = 1u64;
    while out.len() < count {
        let mut g = Vec::with_capacity(2 * pairs);
        for p in 0..pairs {
            let base_a = PRIMES[(2 * p) % PRIMES.len()];
            let base_b = PRIMES[(2 * p + 1) % PRIMES.len()];
            let mut u1 = radical_inverse(index, base_a) + shifts[2 * p];
            let mut u2 = radical_inverse(index, base_b) + shifts[2 * p + 1];
            u1 -= libm::floor(u1);
            u2 -= libm::floor(u2);
            let u1 = u1.max(1e-300);
            let r = libm::sqrt(-2.0 * libm::log(u1));
            g.push(r * libm::cos(tau * u2));
            g.push(r * libm::sin(tau * u2));
        }
        g.truncate(dim);
        index += 1;
        let n = crate::linalg::norm(&g);
        if n > 1e-12 {
            out.push(Vector::from_raw(g.into_iter().map(|c| c / n).collect()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_unit() {
        let a = unit_directions(3, 256, DEFAULT_SEED);
        let b = unit_directions(3, 256, DEFAULT_SEED);
        assert_eq!(a, b);
        for d in &a {
            assert!((d.norm() - 1.0).abs() < 1e-12);
        }
        assert_ne!(a, unit_directions(3, 256, 7));
    }

    #[test]
    fn sphere_covers_all_octants() {
        let dirs = unit_directions(3, 512, DEFAULT_SEED);
        let mut seen = [false; 8];
        for d in &dirs {
            let k = (d[0] > 0.0) as usize | ((d[1] > 0.0) as usize) << 1 | ((d[2] > 0.0) as usize) << 2;
            seen[k] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }

    #[test]
    fn circle_is_evenly_spaced() {
        let dirs = unit_directions(2, 8, 1);
        for w in dirs.windows(2) {
            let c = w[0][0] * w[1][0] + w[0][1] * w[1][1];
            assert!((c - libm::cos(core::f64::consts::PI / 4.0)).abs() < 1e-12);
        }
    }
}
