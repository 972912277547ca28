//! The sets `S_d^(k)` of attainable `E e^Z` over zero-mean laws on at most
//! `k` points with diameter at most `d`: quasi-random sampling, occupancy
//! boundaries and shape diagnostics.

pub mod figure;
pub mod raster;

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::envelope;
use crate::complex_dist::{mix, ComplexValue, FiniteDistribution};
use crate::exec;
use crate::families::{three_point, three_point_value, two_point, TwoPointParams, THREE_POINT_DIM};
use crate::geometry::{convex_hull, point_in_convex, signed_area};
use crate::qmc::Rd;
use crate::{Error, Result};

pub use figure::{figure_checks, figure_panels, FigureChecks, Panel, FIGURE_DIAMETERS};
pub use raster::Raster;

/// Default raster resolution along the longer side.
pub const DEFAULT_GRID: usize = 512;

/// Closing radius, in cells, applied to occupancy rasters before tracing.
pub const CLOSING_RADIUS: usize = 1;

/// Fewer occupied cells than this is too coarse to trace.
pub const MIN_OCCUPIED_CELLS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyClass {
    TwoPoint,
    ThreePoint,
}

impl FamilyClass {
    /// Stored parameters per sample: `[ell, x, theta]`, or the three-point
    /// vector followed by a pin flag (1.0 when the diameter is exactly `d`).
    pub fn stride(self) -> usize {
        match self {
            FamilyClass::TwoPoint => 3,
            FamilyClass::ThreePoint => THREE_POINT_DIM + 1,
        }
    }

    pub fn points(self) -> usize {
        match self {
            FamilyClass::TwoPoint => 2,
            FamilyClass::ThreePoint => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionCloud {
    pub d: f64,
    pub class: FamilyClass,
    pub points: Vec<ComplexValue>,
    /// Flat parameters, [`FamilyClass::stride`] per point.
    pub params: Vec<f64>,
}

impl RegionCloud {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn params_of(&self, i: usize) -> &[f64] {
        let s = self.class.stride();
        &self.params[i * s..(i + 1) * s]
    }

    /// The law that generated point `i`.
    pub fn dist(&self, i: usize) -> Result<FiniteDistribution> {
        let p = self.params_of(i);
        match self.class {
            FamilyClass::TwoPoint => two_point(&TwoPointParams::new(p[0], p[1], p[2])?),
            FamilyClass::ThreePoint => three_point(&p[..THREE_POINT_DIM], self.d, p[THREE_POINT_DIM] != 0.0),
        }
    }
}

fn sample_two_point(d: f64, i: usize, face: &Rd, interior: &Rd) -> ([f64; 3], ComplexValue) {
    let p = if i == 0 {
        [0.0, 0.5, 0.0]
    } else if i % 2 == 1 {
        let mut u = [0.0; 2];
        face.point((i / 2) as u64, &mut u);
        [d, u[0], PI * (2.0 * u[1] - 1.0)]
    } else {
        let mut u = [0.0; 3];
        interior.point((i / 2) as u64, &mut u);
        [d * u[0], u[1], PI * (2.0 * u[2] - 1.0)]
    };
    (p, TwoPointParams { ell: p[0], x: p[1], theta: p[2] }.value())
}

/// Three-point parameters for the two-point law `(ell, x, theta)`: opposite
/// vertices at radii `ell (1-x)` and `ell x`, the third vertex carrying no
/// mass.
fn embed_two_point(d: f64, ell: f64, x: f64, theta: f64) -> [f64; THREE_POINT_DIM + 1] {
    [theta.rem_euclid(2.0 * PI), 0.0, 0.5, ell * (1.0 - x), ell * x, 0.5 * d, 0.0]
}

/// Half the samples are two-point laws; the rest alternate between
/// triangles pinned at diameter `d` and triangles of smaller diameter.
fn sample_three_point(d: f64, i: usize, seqs: &[Rd; 4]) -> ([f64; THREE_POINT_DIM + 1], ComplexValue) {
    let mut p = [0.0; THREE_POINT_DIM + 1];
    if i > 0 {
        if i % 2 == 0 {
            let (q, _) = sample_two_point(d, i / 2, &seqs[0], &seqs[1]);
            p = embed_two_point(d, q[0], q[1], q[2]);
        } else {
            let pinned = i % 4 == 1;
            let mut u = [0.0; THREE_POINT_DIM];
            seqs[if pinned { 2 } else { 3 }].point((i / 4) as u64, &mut u);
            p[0] = 2.0 * PI * u[0];
            p[1] = u[1];
            p[2] = u[2];
            for j in 3..THREE_POINT_DIM {
                p[j] = d * u[j];
            }
            p[THREE_POINT_DIM] = if pinned { 1.0 } else { 0.0 };
        }
    }
    let v = three_point_value(&p[..THREE_POINT_DIM], d, p[THREE_POINT_DIM] != 0.0);
    (p, v)
}

/// `n` values of `E e^Z` from randomly shifted low-discrepancy sweeps of the
/// family. Sample 0 is the point mass at the origin, so the value 1 is
/// always present. Two-point samples alternate between full diameter `d`
/// and smaller diameters.
pub fn sample_region(d: f64, class: FamilyClass, n: usize, seed: u64) -> Result<RegionCloud> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::OutOfRange(format!("diameter must be finite and > 0, got {d}")));
    }
    if n == 0 {
        return Err(Error::OutOfRange("sample count must be >= 1".into()));
    }
    let stride = class.stride();
    let rows: Vec<(Vec<f64>, ComplexValue)> = match class {
        FamilyClass::TwoPoint => {
            let (face, interior) = (Rd::with_seed(2, seed), Rd::with_seed(3, seed.wrapping_add(1)));
            exec::map_indexed(n, |i| {
                let (p, v) = sample_two_point(d, i, &face, &interior);
                (p.to_vec(), v)
            })
        }
        FamilyClass::ThreePoint => {
            let seqs = [
                Rd::with_seed(2, seed),
                Rd::with_seed(3, seed.wrapping_add(1)),
                Rd::with_seed(THREE_POINT_DIM, seed.wrapping_add(2)),
                Rd::with_seed(THREE_POINT_DIM, seed.wrapping_add(3)),
            ];
            exec::map_indexed(n, |i| {
                let (p, v) = sample_three_point(d, i, &seqs);
                (p.to_vec(), v)
            })
        }
    };
    let mut points = Vec::with_capacity(n);
    let mut params = Vec::with_capacity(n * stride);
    for (p, v) in rows {
        params.extend_from_slice(&p);
        points.push(v);
    }
    Ok(RegionCloud { d, class, points, params })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    /// Counterclockwise, first vertex repeated at the end.
    pub vertices: Vec<ComplexValue>,
    pub cell_size: f64,
}

impl BoundaryCurve {
    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() >= 4 && self.vertices.first() == self.vertices.last()
    }

    /// Largest `|v - 1|` over the vertices.
    pub fn max_distance_from_one(&self) -> f64 {
        self.vertices.iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max)
    }
}

fn filled_raster(points: &[ComplexValue], grid: usize) -> Result<Raster> {
    let mut r = Raster::from_points(points, grid).ok_or(Error::EmptySupport)?;
    r.close(CLOSING_RADIUS);
    r.fill_holes();
    let occupied = r.occupied_count();
    if occupied < MIN_OCCUPIED_CELLS {
        return Err(Error::TooCoarse { occupied });
    }
    Ok(r)
}

/// Outer boundaries of the closed, hole-filled occupancy raster of
/// `points`, largest first.
pub fn trace_points(points: &[ComplexValue], grid: usize) -> Result<Vec<BoundaryCurve>> {
    let r = filled_raster(points, grid)?;
    let cell_size = r.cell_size();
    Ok(r.contours().into_iter().map(|vertices| BoundaryCurve { vertices, cell_size }).collect())
}

pub fn trace_boundary(cloud: &RegionCloud, grid: usize) -> Result<Vec<BoundaryCurve>> {
    trace_points(&cloud.points, grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarlikeReport {
    pub checked: usize,
    pub passed: usize,
    pub max_value_error: f64,
    pub max_diameter_excess: f64,
}

/// Shrink sampled laws toward the point mass at 0 by mixing, `c Z + (1-c) 0`,
/// and check the mixture stays within diameter `d` with value exactly on
/// the segment from 1 to the original value. The first two pairs use
/// `c = 1` and `c = 0`.
pub fn starlike_check(cloud: &RegionCloud, pairs: usize, seed: u64) -> Result<StarlikeReport> {
    if cloud.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zero = FiniteDistribution::point_mass(ComplexValue::new(0.0, 0.0))?;
    let mut report = StarlikeReport { checked: 0, passed: 0, max_value_error: 0.0, max_diameter_excess: 0.0 };
    for k in 0..pairs {
        let i = rng.random_range(0..cloud.len());
        let c = match k {
            0 => 1.0,
            1 => 0.0,
            _ => rng.random_range(0.0..=1.0),
        };
        let z = cloud.dist(i)?;
        let mixed = mix(&[z, zero.clone()], &[c, 1.0 - c])?;
        let expected = 1.0 + (cloud.points[i] - 1.0) * c;
        let err = (mixed.expect_exp()? - expected).norm();
        let excess = (mixed.diameter() - cloud.d).max(0.0);
        report.checked += 1;
        if err <= 1e-12 * expected.norm().max(1.0) && excess <= 1e-12 * cloud.d {
            report.passed += 1;
        }
        report.max_value_error = report.max_value_error.max(err);
        report.max_diameter_excess = report.max_diameter_excess.max(excess);
    }
    Ok(report)
}

/// A 4-connected group of empty cells inside the convex hull.
#[derive(Debug, Clone, PartialEq)]
pub struct Pocket {
    pub cells: usize,
    pub centroid: ComplexValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    /// Empty area inside the convex hull over the hull area.
    pub gap: f64,
    pub missing_cells: usize,
    pub hull_area: f64,
    pub cell_size: f64,
    /// Empty regions inside the hull, largest first.
    pub pockets: Vec<Pocket>,
    /// `(min, max)` real part over the hull.
    pub hull_re_range: (f64, f64),
}

impl ConvexityReport {
    /// Position of the largest pocket across the hull's real extent, from 0
    /// at the leftmost hull point to 1 at the rightmost.
    pub fn relative_position(&self) -> Option<f64> {
        let (lo, hi) = self.hull_re_range;
        self.pockets.first().map(|p| (p.centroid.re - lo) / (hi - lo))
    }
}

/// Area between the convex hull of `points` and their closed, hole-filled
/// occupancy raster, counting cells whose centers lie in the hull.
pub fn convexity_report(points: &[ComplexValue], grid: usize) -> Result<ConvexityReport> {
    let hull = convex_hull(points);
    let hull_area = signed_area(&hull);
    let span = points.iter().map(|p| (p - points[0]).norm()).fold(0.0, f64::max);
    if hull.len() < 3 || !(hull_area > 1e-12 * span * span) {
        return Err(Error::DegenerateCloud);
    }
    let r = filled_raster(points, grid)?;
    let (nx, ny) = r.dims();
    let mut missing = vec![false; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            missing[j * nx + i] = !r.is_occupied(i, j) && point_in_convex(r.center(i, j), &hull);
        }
    }
    let total = missing.iter().filter(|&&m| m).count();
    let mut pockets = Vec::new();
    let mut seen = vec![false; nx * ny];
    for start in 0..nx * ny {
        if !missing[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let (mut stack, mut cells, mut sum) = (vec![start], 0usize, ComplexValue::new(0.0, 0.0));
        while let Some(k) = stack.pop() {
            let (i, j) = (k % nx, k / nx);
            cells += 1;
            sum += r.center(i, j);
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                if ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                    continue;
                }
                let kk = jj as usize * nx + ii as usize;
                if missing[kk] && !seen[kk] {
                    seen[kk] = true;
                    stack.push(kk);
                }
            }
        }
        pockets.push(Pocket { cells, centroid: sum / cells as f64 });
    }
    pockets.sort_by(|a, b| b.cells.cmp(&a.cells).then(a.centroid.re.total_cmp(&b.centroid.re)).then(a.centroid.im.total_cmp(&b.centroid.im)));
    let h = r.cell_size();
    let re_lo = hull.iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
    let re_hi = hull.iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(ConvexityReport {
        gap: total as f64 * h * h / hull_area,
        missing_cells: total,
        hull_area,
        cell_size: h,
        pockets,
        hull_re_range: (re_lo, re_hi),
    })
}

pub fn convexity_gap(cloud: &RegionCloud, grid: usize) -> Result<f64> {
    Ok(convexity_report(&cloud.points, grid)?.gap)
}

/// Largest `|p - 1| - envelope(d)` over the cloud; non-positive when every
/// point respects the envelope.
pub fn envelope_excess(cloud: &RegionCloud) -> Result<f64> {
    let e = envelope(cloud.d)?;
    Ok(cloud.points.iter().map(|p| (p - 1.0).norm() - e).fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    pub total: usize,
    /// Points of the inner cloud farther than the margin from any occupied
    /// cell of the outer raster.
    pub outside: usize,
    pub margin_cells: usize,
}

/// How many `inner` points miss the hole-filled raster of `outer` by more
/// than `margin_cells` cells.
pub fn containment(inner: &[ComplexValue], outer: &[ComplexValue], grid: usize, margin_cells: usize) -> Result<ContainmentReport> {
    let r = filled_raster(outer, grid)?;
    let outside = inner.iter().filter(|&&p| !r.occupied_near(p, margin_cells)).count();
    Ok(ContainmentReport { total: inner.len(), outside, margin_cells })
}
