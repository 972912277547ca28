//! Finite-support complex random variables.
//!
//! A [`FiniteDistribution`] is an ordered list of atoms `(point, prob)` with
//! strictly positive probabilities summing to one and pairwise distinct
//! points. Every operation here is an exact finite sum over the atoms.

mod disk;
mod text;

use std::collections::HashMap;

pub use disk::{enclosing_disk_of, Disk};
pub use num_complex::Complex64 as ComplexValue;

use crate::{Error, Result};

/// Largest `Re z` for which `exp(z)` stays finite in double precision.
pub const EXP_OVERFLOW_RE: f64 = 709.782712893384;

/// Probabilities whose sum is off by at most this much are renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub point: ComplexValue,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    atoms: Vec<Atom>,
}

fn check_finite(z: ComplexValue) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("support point {z}")))
    }
}

// -0.0 and 0.0 must merge.
fn point_key(z: ComplexValue) -> (u64, u64) {
    ((z.re + 0.0).to_bits(), (z.im + 0.0).to_bits())
}

impl FiniteDistribution {
    /// Build a distribution from `(point, prob)` pairs.
    ///
    /// Zero-probability atoms are dropped and exactly coincident points are
    /// merged (first occurrence keeps its position). A total within
    /// [`RENORMALIZE_TOL`] of one is renormalized; anything further off is an
    /// error.
    pub fn new<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ComplexValue, f64)>,
    {
        let mut merged: Vec<Atom> = Vec::new();
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut sum = 0.0;
        for (point, prob) in atoms {
            check_finite(point)?;
            if !prob.is_finite() || prob < 0.0 {
                return Err(Error::InvalidProbability(format!("{prob} at {point}")));
            }
            sum += prob;
            if prob == 0.0 {
                continue;
            }
            match index.get(&point_key(point)) {
                Some(&i) => merged[i].prob += prob,
                None => {
                    index.insert(point_key(point), merged.len());
                    merged.push(Atom { point: point + 0.0, prob });
                }
            }
        }
        if merged.is_empty() {
            return Err(Error::EmptySupport);
        }
        if (sum - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::Normalization { sum });
        }
        let total: f64 = merged.iter().map(|a| a.prob).sum();
        // leave sums already at rounding level alone so reconstruction is idempotent
        if (total - 1.0).abs() > 1e-14 {
            for a in merged.iter_mut() {
                a.prob /= total;
            }
        }
        Ok(Self { atoms: merged })
    }

    pub fn point_mass(point: ComplexValue) -> Result<Self> {
        check_finite(point)?;
        Ok(Self { atoms: vec![Atom { point: point + 0.0, prob: 1.0 }] })
    }

    /// Uniform distribution over the given (distinct or not) points.
    pub fn uniform(points: &[ComplexValue]) -> Result<Self> {
        let p = 1.0 / points.len() as f64;
        Self::new(points.iter().map(|&z| (z, p)))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = ComplexValue> + '_ {
        self.atoms.iter().map(|a| a.point)
    }

    pub fn probs(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.prob)
    }

    pub fn mean(&self) -> ComplexValue {
        self.atoms.iter().map(|a| a.point * a.prob).sum()
    }

    /// `Z - E Z`.
    pub fn center(&self) -> Self {
        let m = self.mean();
        self.map_points_unchecked(|z| z - m)
    }

    /// Apply `f` to every support point. Coincident images merge.
    pub fn map_points<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(ComplexValue) -> ComplexValue,
    {
        Self::new(self.atoms.iter().map(|a| (f(a.point), a.prob)))
    }

    fn map_points_unchecked<F>(&self, f: F) -> Self
    where
        F: Fn(ComplexValue) -> ComplexValue,
    {
        // finite affine images of finite points; only merging can occur
        self.map_points(f).expect("finite affine image of a valid distribution")
    }

    /// `a Z + b`.
    pub fn affine(&self, a: ComplexValue, b: ComplexValue) -> Result<Self> {
        if a == ComplexValue::new(0.0, 0.0) {
            return Self::point_mass(b);
        }
        self.map_points(|z| a * z + b)
    }

    /// Largest pairwise distance between support points.
    pub fn diameter(&self) -> f64 {
        let n = self.atoms.len();
        let mut best: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                best = best.max((self.atoms[i].point - self.atoms[j].point).norm());
            }
        }
        best
    }

    /// `E F(Z)`; fails if `F` is not finite somewhere on the support.
    pub fn expect<F>(&self, f: F) -> Result<ComplexValue>
    where
        F: Fn(ComplexValue) -> ComplexValue,
    {
        let mut acc = ComplexValue::new(0.0, 0.0);
        for a in &self.atoms {
            let v = f(a.point);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::NonFinite(format!("F({}) = {}", a.point, v)));
            }
            acc += v * a.prob;
        }
        Ok(acc)
    }

    /// `E e^Z`. Fails instead of saturating when some `Re z` would overflow.
    pub fn expect_exp(&self) -> Result<ComplexValue> {
        if let Some(a) = self.atoms.iter().find(|a| a.point.re > EXP_OVERFLOW_RE) {
            return Err(Error::Overflow(a.point.re));
        }
        Ok(self.atoms.iter().map(|a| a.point.exp() * a.prob).sum())
    }

    /// `E Z^k` by repeated multiplication.
    pub fn moment(&self, k: u32) -> Result<ComplexValue> {
        if k == 0 {
            return Err(Error::OutOfRange("moment order must be at least 1".into()));
        }
        Ok(self
            .atoms
            .iter()
            .map(|a| {
                let mut p = a.point;
                for _ in 1..k {
                    p *= a.point;
                }
                p * a.prob
            })
            .sum())
    }

    /// Smallest closed disk containing the support.
    pub fn enclosing_disk(&self) -> Disk {
        let pts: Vec<ComplexValue> = self.points().collect();
        enclosing_disk_of(&pts).expect("non-empty support")
    }
}

/// The mixture `Mix_{c_1..c_n}(Z_1..Z_n)`: union support with accumulated
/// probabilities `sum_j c_j P(Z_j = z)`.
pub fn mix(dists: &[FiniteDistribution], weights: &[f64]) -> Result<FiniteDistribution> {
    if dists.len() != weights.len() {
        return Err(Error::WeightMismatch(format!(
            "{} distributions, {} weights",
            dists.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::WeightMismatch(format!("negative or non-finite weight {w}")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::WeightMismatch(format!("weights sum to {sum}")));
    }
    FiniteDistribution::new(
        dists
            .iter()
            .zip(weights)
            .flat_map(|(d, &c)| d.atoms.iter().map(move |a| (a.point, c * a.prob))),
    )
}
