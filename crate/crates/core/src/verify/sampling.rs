//! Seeded generators of random finite laws for property sweeps.

use rand::Rng;

use crate::complex_dist::{ComplexValue, FiniteDistribution};

/// A law on `atoms` points drawn uniformly from the unit square with
/// probabilities bounded away from zero.
pub fn random_dist<R: Rng>(rng: &mut R, atoms: usize) -> FiniteDistribution {
    loop {
        let raw: Vec<(ComplexValue, f64)> = (0..atoms)
            .map(|_| (ComplexValue::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)), rng.random_range(0.05..1.0)))
            .collect();
        let total: f64 = raw.iter().map(|a| a.1).sum();
        if let Ok(d) = FiniteDistribution::new(raw.into_iter().map(|(z, p)| (z, p / total))) {
            if d.len() == atoms {
                return d;
            }
        }
    }
}

/// A zero-mean law on `atoms` points rescaled to diameter exactly `d`.
pub fn random_zero_mean<R: Rng>(rng: &mut R, atoms: usize, d: f64) -> FiniteDistribution {
    loop {
        let z = random_dist(rng, atoms).center();
        let diam = z.diameter();
        if diam > 0.0 {
            if let Ok(scaled) = z.map_points(|p| p * (d / diam)) {
                return scaled.center();
            }
        }
    }
}
