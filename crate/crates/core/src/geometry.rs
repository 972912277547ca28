//! Planar helpers on complex numbers: accurate orientation, convex hulls and
//! polygon measures.

use crate::ComplexValue;

/// `a.re * b.im - a.im * b.re` with Kahan's FMA correction.
///
/// The relative error is a few ulps of the true value, so the sign is exact
/// whenever the result does not underflow.
#[inline]
pub fn cross(a: ComplexValue, b: ComplexValue) -> f64 {
    let p = a.im * b.re;
    let err = a.im.mul_add(b.re, -p);
    let q = a.re.mul_add(b.im, -p);
    q - err
}

/// Twice the signed area of triangle `abc`; positive when counterclockwise.
#[inline]
pub fn orient(a: ComplexValue, b: ComplexValue, c: ComplexValue) -> f64 {
    cross(b - a, c - a)
}

/// Convex hull by Andrew's monotone chain, counterclockwise, without the
/// closing vertex. Collinear boundary points are dropped.
pub fn convex_hull(points: &[ComplexValue]) -> Vec<ComplexValue> {
    let mut pts: Vec<ComplexValue> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<ComplexValue> = Vec::with_capacity(2 * pts.len());
    for &p in pts.iter() {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Signed shoelace area; positive for counterclockwise vertex order. A
/// repeated closing vertex is harmless.
pub fn signed_area(poly: &[ComplexValue]) -> f64 {
    if poly.len() < 3 {
        return 0.0;
    }
    let n = poly.len();
    let origin = poly[0];
    let mut acc = 0.0;
    for i in 0..n {
        let a = poly[i] - origin;
        let b = poly[(i + 1) % n] - origin;
        acc += a.re * b.im - a.im * b.re;
    }
    0.5 * acc
}

/// Even-odd point-in-polygon test.
pub fn point_in_polygon(p: ComplexValue, poly: &[ComplexValue]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im);
            if p.re < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

/// Distance from `p` to the closed polygon boundary.
pub fn distance_to_boundary(p: ComplexValue, poly: &[ComplexValue]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| segment_distance(p, poly[i], poly[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

pub fn segment_distance(p: ComplexValue, a: ComplexValue, b: ComplexValue) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Inside test for a counterclockwise convex polygon, boundary inclusive.
pub fn point_in_convex(p: ComplexValue, hull: &[ComplexValue]) -> bool {
    let n = hull.len();
    if n < 3 {
        return false;
    }
    (0..n).all(|i| orient(hull[i], hull[(i + 1) % n], p) >= 0.0)
}
