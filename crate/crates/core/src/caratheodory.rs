//! Splitting a zero-mean finite distribution into a mixture of zero-mean
//! pieces on at most three of its atoms.

use crate::complex_dist::{mix, ComplexValue, FiniteDistribution};
use crate::families::COLLINEAR_TOL;
use crate::geometry::cross;
use crate::{Error, Result};

/// Relative tolerance for an atom at the origin and for a segment through it.
const ON_ORIGIN_TOL: f64 = 1e-12;

/// The origin may sit this far (relative to the largest atom) outside the
/// hull of the chosen subset when no exact subset exists.
const HULL_SLACK: f64 = 1e-9;

/// Largest accepted input mean, relative to `max(1, max |z|)`.
pub const MEAN_TOL: f64 = 1e-10;

/// Leftover probability below this ends the peeling.
const MASS_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDecomposition {
    pub components: Vec<(f64, FiniteDistribution)>,
}

impl MixtureDecomposition {
    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.components.iter().map(|(w, _)| *w)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// The mixture of the components.
    pub fn reconstruct(&self) -> Result<FiniteDistribution> {
        let (w, d): (Vec<f64>, Vec<FiniteDistribution>) = self.components.iter().cloned().unzip();
        mix(&d, &w)
    }
}

/// Indices of at most three points whose convex hull contains the origin,
/// with convex weights `w` such that `sum w_k z_k = 0`.
///
/// Preference goes to a single point at the origin, then to a
/// non-degenerate triangle containing it strictly, then to a segment through
/// it.
pub fn zero_simplex_subset(points: &[ComplexValue]) -> Result<(Vec<usize>, Vec<f64>)> {
    if points.is_empty() {
        return Err(Error::EmptySupport);
    }
    if points.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("point".into()));
    }
    let scale = points.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if let Some(i) = points.iter().position(|z| z.norm() <= ON_ORIGIN_TOL * scale) {
        return Ok((vec![i], vec![1.0]));
    }
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let oij = cross(points[i], points[j]);
            if oij == 0.0 {
                continue;
            }
            for k in j + 1..n {
                let ojk = cross(points[j], points[k]);
                let oki = cross(points[k], points[i]);
                let same = (oij > 0.0 && ojk > 0.0 && oki > 0.0) || (oij < 0.0 && ojk < 0.0 && oki < 0.0);
                let s = oij + ojk + oki;
                if same && !nearly_collinear(s, points[i], points[j], points[k]) {
                    return Ok((vec![i, j, k], vec![ojk / s, oki / s, oij / s]));
                }
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (points[i], points[j]);
            let (na, nb) = (a.norm(), b.norm());
            if cross(a, b).abs() <= ON_ORIGIN_TOL * na * nb && (a.re * b.re + a.im * b.im) < 0.0 {
                return Ok((vec![i, j], vec![nb / (na + nb), na / (na + nb)]));
            }
        }
    }
    nearest_segment(points, scale)
}

/// Twice-area `s` at or below [`COLLINEAR_TOL`] times the squared diameter,
/// the same threshold [`TriangleSupport`](crate::families::TriangleSupport)
/// rejects.
fn nearly_collinear(s: f64, a: ComplexValue, b: ComplexValue, c: ComplexValue) -> bool {
    let diam = (a - b).norm().max((b - c).norm()).max((c - a).norm());
    s.abs() <= COLLINEAR_TOL * diam * diam
}

/// Fallback for an origin on the hull boundary up to rounding: the segment
/// (or single point) closest to the origin, if within [`HULL_SLACK`].
fn nearest_segment(points: &[ComplexValue], scale: f64) -> Result<(Vec<usize>, Vec<f64>)> {
    let mut best: Option<(f64, Vec<usize>, Vec<f64>)> = None;
    let mut consider = |dist: f64, idx: Vec<usize>, w: Vec<f64>| {
        if best.as_ref().is_none_or(|(d, _, _)| dist < *d) {
            best = Some((dist, idx, w));
        }
    };
    for (i, &a) in points.iter().enumerate() {
        consider(a.norm(), vec![i], vec![1.0]);
        for (j, &b) in points.iter().enumerate().skip(i + 1) {
            let ab = b - a;
            let t = -(a.re * ab.re + a.im * ab.im) / ab.norm_sqr();
            if t > 0.0 && t < 1.0 {
                consider((a + ab * t).norm(), vec![i, j], vec![1.0 - t, t]);
            }
        }
    }
    match best {
        Some((d, idx, w)) if d <= HULL_SLACK * scale => Ok((idx, w)),
        _ => Err(Error::OriginNotInHull),
    }
}

/// Peel zero-mean pieces off `dist` until its mass is exhausted.
///
/// Each peel takes the largest multiple `c q` of a zero-mean piece `q` on a
/// subset of the remaining atoms that keeps all probabilities non-negative,
/// and drops the atom attaining the minimum. A remainder that is itself a
/// single zero-mean simplex is emitted whole.
pub fn decompose(dist: &FiniteDistribution) -> Result<MixtureDecomposition> {
    let scale = dist.points().map(|z| z.norm()).fold(1.0, f64::max);
    let mean = dist.mean();
    if mean.norm() > MEAN_TOL * scale {
        return Err(Error::NonZeroMean(mean.norm()));
    }
    let points: Vec<ComplexValue> = dist.points().collect();
    let mut p: Vec<f64> = dist.probs().collect();
    let mut out: Vec<(f64, FiniteDistribution)> = Vec::new();
    loop {
        let active: Vec<usize> = (0..p.len()).filter(|&k| p[k] > 0.0).collect();
        let mass: f64 = active.iter().map(|&k| p[k]).sum();
        if active.is_empty() || mass < MASS_EPS {
            break;
        }
        let sub: Vec<ComplexValue> = active.iter().map(|&k| points[k]).collect();
        let (idx, q) = zero_simplex_subset(&sub)?;
        if idx.len() == active.len() {
            let atoms = active.iter().map(|&k| (points[k], p[k] / mass));
            out.push((mass, FiniteDistribution::new(atoms)?));
            break;
        }
        let members: Vec<usize> = idx.iter().map(|&i| active[i]).collect();
        let (argmin, c) = members
            .iter()
            .zip(&q)
            .map(|(&k, &qk)| (k, p[k] / qk))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty subset");
        for (&k, &qk) in members.iter().zip(&q) {
            p[k] = (p[k] - c * qk).max(0.0);
            if p[k] <= MASS_EPS * 1e-3 {
                p[k] = 0.0;
            }
        }
        p[argmin] = 0.0;
        let atoms = members.iter().zip(&q).filter(|(_, &qk)| qk > 0.0).map(|(&k, &qk)| (points[k], qk));
        out.push((c, FiniteDistribution::new(atoms)?));
    }
    let total: f64 = out.iter().map(|(w, _)| w).sum();
    for (w, _) in out.iter_mut() {
        *w /= total;
    }
    Ok(MixtureDecomposition { components: out })
}
