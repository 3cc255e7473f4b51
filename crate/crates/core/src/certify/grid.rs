use alloc::vec::Vec;

/// Tensor grid over a box, first axis slowest. Axis `k` has the coordinates
/// `lo + (hi - lo) i / (n - 1)` for `i = 0..n`.
#[derive(Debug, Clone)]
pub struct Grid {
    dim: usize,
    resolution: usize,
    bounds: Vec<(f64, f64)>,
    coords: Vec<f64>,
}

pub(crate) fn axis_coord(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

impl Grid {
    pub fn new(bounds: &[(f64, f64)], resolution: usize) -> Grid {
        let dim = bounds.len();
        let total = resolution.pow(dim as u32);
        let mut coords = Vec::with_capacity(total * dim);
        let mut idx = alloc::vec![0usize; dim];
        for _ in 0..total {
            for (k, &(lo, hi)) in bounds.iter().enumerate() {
                coords.push(axis_coord(lo, hi, idx[k], resolution));
            }
            for k in (0..dim).rev() {
                idx[k] += 1;
                if idx[k] < resolution {
                    break;
                }
                idx[k] = 0;
            }
        }
        Grid { dim, resolution, bounds: bounds.to_vec(), coords }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn step(&self, axis: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        (hi - lo) / (self.resolution - 1) as f64
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }

    fn multi(&self, mut i: usize) -> Vec<usize> {
        let mut m = alloc::vec![0; self.dim];
        for k in (0..self.dim).rev() {
            m[k] = i % self.resolution;
            i /= self.resolution;
        }
        m
    }

    /// The next grid point along each axis, where one exists.
    pub fn successors(&self, i: usize) -> Vec<usize> {
        let m = self.multi(i);
        let mut stride = 1;
        let mut out = Vec::with_capacity(self.dim);
        for k in (0..self.dim).rev() {
            if m[k] + 1 < self.resolution {
                out.push(i + stride);
            }
            stride *= self.resolution;
        }
        out
    }

    /// Indices of the `3^dim - 1` surrounding grid points that exist.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let m = self.multi(i);
        let n = self.resolution as isize;
        let total = 3usize.pow(self.dim as u32);
        let mut out = Vec::with_capacity(total - 1);
        'outer: for code in 0..total {
            let mut c = code;
            let mut j: isize = 0;
            let mut zero = true;
            for &mk in m.iter() {
                let off = (c % 3) as isize - 1;
                c /= 3;
                let v = mk as isize + off;
                if v < 0 || v >= n {
                    continue 'outer;
                }
                zero &= off == 0;
                j = j * n + v;
            }
            if !zero {
                out.push(j as usize);
            }
        }
        out.sort_unstable();
        out
    }
}

/// Exact nearest-point distances to a finite point set. Small sets are
/// scanned; larger ones go through a k-d tree.
#[derive(Debug, Clone)]
pub struct NearestSet {
    dim: usize,
    points: Vec<f64>,
    tree: Option<KdTree>,
}

const BRUTE_FORCE_MAX: usize = 64;

impl NearestSet {
    pub fn new(dim: usize, points: Vec<f64>) -> NearestSet {
        let n = points.len() / dim;
        let tree = (n > BRUTE_FORCE_MAX).then(|| KdTree::build(dim, &points));
        NearestSet { dim, points, tree }
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// `(index, distance)` of the nearest member; ties go to the lowest index.
    pub fn nearest(&self, x: &[f64]) -> Option<(usize, f64)> {
        if self.is_empty() {
            return None;
        }
        let (i, d2) = match &self.tree {
            Some(t) => t.nearest(&self.points, x),
            None => {
                let mut best = (0, f64::INFINITY);
                for i in 0..self.len() {
                    let d2 = sq_dist(self.point(i), x);
                    if d2 < best.1 {
                        best = (i, d2);
                    }
                }
                best
            }
        };
        Some((i, libm::sqrt(d2)))
    }

    pub fn distance(&self, x: &[f64]) -> f64 {
        self.nearest(x).map_or(f64::INFINITY, |(_, d)| d)
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[derive(Debug, Clone)]
struct KdTree {
    dim: usize,
    /// Point indices in tree order; node `[lo, hi)` splits at `mid = (lo + hi) / 2`.
    order: Vec<usize>,
}

impl KdTree {
    fn build(dim: usize, points: &[f64]) -> KdTree {
        let n = points.len() / dim;
        let mut order: Vec<usize> = (0..n).collect();
        Self::split(dim, points, &mut order, 0);
        KdTree { dim, order }
    }

    fn split(dim: usize, points: &[f64], idx: &mut [usize], depth: usize) {
        if idx.len() <= 1 {
            return;
        }
        let axis = depth % dim;
        let mid = idx.len() / 2;
        idx.select_nth_unstable_by(mid, |&a, &b| {
            points[a * dim + axis].total_cmp(&points[b * dim + axis]).then(a.cmp(&b))
        });
        let (left, right) = idx.split_at_mut(mid);
        Self::split(dim, points, left, depth + 1);
        Self::split(dim, points, &mut right[1..], depth + 1);
    }

    fn nearest(&self, points: &[f64], x: &[f64]) -> (usize, f64) {
        let mut best = (usize::MAX, f64::INFINITY);
        self.search(points, x, 0, self.order.len(), 0, &mut best);
        best
    }

    fn search(&self, points: &[f64], x: &[f64], lo: usize, hi: usize, depth: usize, best: &mut (usize, f64)) {
        if lo >= hi {
            return;
        }
        let dim = self.dim;
        let mid = lo + (hi - lo) / 2;
        let p = self.order[mid];
        let d2 = sq_dist(&points[p * dim..(p + 1) * dim], x);
        if d2 < best.1 || (d2 == best.1 && p < best.0) {
            *best = (p, d2);
        }
        let axis = depth % dim;
        let diff = x[axis] - points[p * dim + axis];
        let (near, far) = if diff < 0.0 { ((lo, mid), (mid + 1, hi)) } else { ((mid + 1, hi), (lo, mid)) };
        self.search(points, x, near.0, near.1, depth + 1, best);
        if diff * diff <= best.1 {
            self.search(points, x, far.0, far.1, depth + 1, best);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;

    #[test]
    fn grid_layout() {
        let g = Grid::new(&[(-1.0, 1.0), (0.0, 2.0)], 3);
        assert_eq!(g.len(), 9);
        assert_eq!(g.point(0), &[-1.0, 0.0]);
        assert_eq!(g.point(1), &[-1.0, 1.0]);
        assert_eq!(g.point(8), &[1.0, 2.0]);
        assert_eq!(g.neighbors(4).len(), 8);
        assert_eq!(g.neighbors(0), alloc::vec![1, 3, 4]);
        let h = Grid::new(&[(-5.0, 5.0)], 2001);
        assert_eq!(h.point(1000), &[0.0]);
        assert_eq!(h.point(2000), &[5.0]);
    }

    #[test]
    fn kd_tree_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut pts = Vec::new();
        for _ in 0..500 * 3 {
            pts.push(crate::geometry::directions::unit_f64(&mut rng) * 4.0 - 2.0);
        }
        let set = NearestSet::new(3, pts.clone());
        assert!(set.tree.is_some());
        for _ in 0..200 {
            let q: Vec<f64> = (0..3).map(|_| crate::geometry::directions::unit_f64(&mut rng) * 6.0 - 3.0).collect();
            let brute = (0..500).map(|i| sq_dist(&pts[i * 3..i * 3 + 3], &q)).fold(f64::INFINITY, f64::min);
            assert_eq!(set.distance(&q), libm::sqrt(brute));
        }
    }
}
