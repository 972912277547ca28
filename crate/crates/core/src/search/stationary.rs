//! Newton iteration for triangle supports at which the real-part or
//! modulus functional is stationary at the origin.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex_dist::ComplexValue;
use crate::families::{
    expansion_coefficients, local_quadratic, stationary_frame, ExpansionCoefficients, Functional, StationaryFrame,
    TriangleSupport,
};
use crate::{Error, Result};

const MAX_ATTEMPTS: usize = 500;
const MAX_NEWTON_STEPS: usize = 60;
/// Accept once the frame residual is below this.
const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryPoint {
    /// Support translated so that the stationary mean is the origin.
    pub support: TriangleSupport,
    pub coefficients: ExpansionCoefficients,
    pub frame: StationaryFrame,
    pub residual: f64,
}

/// Search random triangles (seeded) for one whose functional is stationary
/// at a strictly interior mean, then translate that mean to the origin.
pub fn stationary_support(functional: Functional, seed: u64) -> Result<StationaryPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let scale = rng.random_range(0.5..2.5);
        let z: [ComplexValue; 3] = std::array::from_fn(|_| {
            ComplexValue::from_polar(scale * rng.random_range(0.3..1.0), rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
        });
        let Ok(support) = TriangleSupport::new(z[0], z[1], z[2]) else { continue };
        if !support.strictly_contains(ComplexValue::new(0.0, 0.0)) {
            continue;
        }
        if let Some(p) = newton(support, functional) {
            return Ok(p);
        }
    }
    Err(Error::OutOfRange(format!("no stationary support found in {MAX_ATTEMPTS} attempts")))
}

fn newton(mut support: TriangleSupport, functional: Functional) -> Option<StationaryPoint> {
    for _ in 0..MAX_NEWTON_STEPS {
        let coefficients = expansion_coefficients(&support);
        let (frame, residual) = stationary_frame(&coefficients, functional).ok()?;
        if residual < RESIDUAL_TOL {
            // keep a margin so finite differences around the origin stay inside
            let inner = support.barycentric(ComplexValue::new(0.0, 0.0)).into_iter().fold(1.0, f64::min);
            return (inner > 1e-2).then_some(StationaryPoint { support, coefficients, frame, residual });
        }
        let (g, h) = local_quadratic(&coefficients, functional);
        // gradient of the functional is g, its Hessian is 2h
        let det = 4.0 * h.det();
        if det.abs() < 1e-14 {
            return None;
        }
        let dx = -(2.0 * h.yy * g[0] - 2.0 * h.xy * g[1]) / det;
        let dy = -(-2.0 * h.xy * g[0] + 2.0 * h.xx * g[1]) / det;
        let step = ComplexValue::new(dx, dy);
        if !support.strictly_contains(step) {
            return None;
        }
        support = support.translate(-step).ok()?;
    }
    None
}
