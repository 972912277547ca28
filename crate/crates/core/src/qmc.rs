//! Low-discrepancy parameter sweeps.
//!
//! The additive recurrence `x_n = frac(s + n * alpha)` with
//! `alpha_j = phi^-(j+1)`, `phi` the unique positive root of
//! `x^(dim+1) = x + 1` (golden ratio in one dimension, plastic number in two).
//! A seeded random shift `s` gives independent, reproducible sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Rd {
    alpha: Vec<f64>,
    shift: Vec<f64>,
}

fn generalized_golden(dim: usize) -> f64 {
    // Newton on x^(d+1) - x - 1 from x = 2 converges monotonically
    let p = dim as i32 + 1;
    let mut x = 2.0f64;
    for _ in 0..64 {
        let f = x.powi(p) - x - 1.0;
        let df = p as f64 * x.powi(p - 1) - 1.0;
        let next = x - f / df;
        if next == x {
            break;
        }
        x = next;
    }
    x
}

impl Rd {
    /// Unshifted sequence (shift 1/2 in every coordinate).
    pub fn new(dim: usize) -> Self {
        let phi = generalized_golden(dim);
        let alpha = (1..=dim).map(|j| phi.powi(-(j as i32))).collect();
        Self { alpha, shift: vec![0.5; dim] }
    }

    pub fn with_seed(dim: usize, seed: u64) -> Self {
        let mut rd = Self::new(dim);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in rd.shift.iter_mut() {
            *s = rng.random::<f64>();
        }
        rd
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    /// The `n`-th point in `[0,1)^dim`.
    pub fn point(&self, n: u64, out: &mut [f64]) {
        for ((o, a), s) in out.iter_mut().zip(&self.alpha).zip(&self.shift) {
            // reduce n*alpha modulo 1 exactly enough for n up to 2^40
            let prod = (n as f64) * a;
            let v = s + (prod - prod.floor());
            *o = v - v.floor();
        }
    }

    /// The `n`-th point mapped onto the box `bounds`.
    pub fn point_in(&self, n: u64, bounds: &[(f64, f64)], out: &mut [f64]) {
        self.point(n, out);
        for (o, (lo, hi)) in out.iter_mut().zip(bounds) {
            *o = lo + (hi - lo) * *o;
        }
    }
}

/// The `n`-th node (row-major, last axis fastest) of a tensor grid with
/// `counts[j]` equispaced nodes per axis including both endpoints.
pub fn grid_point(counts: &[usize], bounds: &[(f64, f64)], mut n: usize, out: &mut [f64]) {
    for j in (0..counts.len()).rev() {
        let k = counts[j];
        let idx = n % k;
        n /= k;
        let (lo, hi) = bounds[j];
        out[j] = if k == 1 { 0.5 * (lo + hi) } else { lo + (hi - lo) * idx as f64 / (k - 1) as f64 };
    }
}
