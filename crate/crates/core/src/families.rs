//! Zero-mean parametric families and the local analysis of `E e^{Z}` over a
//! fixed triangle support.
//!
//! For a non-collinear support `{z1, z2, z3}` and a mean `x + iy` inside its
//! hull, the probabilities are the barycentric coordinates of `x + iy`, so
//! `E e^{Z(x,y)} = A x + B y + C` exactly and
//! `E e^{Z(x,y) - (x+iy)} = e^{-x-iy} (A x + B y + C)`. The second-order
//! behaviour of the real part and of `|. - 1|^2` around `(0, 0)` is captured
//! by the symmetric matrices built here.

use std::f64::consts::PI;

use crate::complex_dist::{ComplexValue, FiniteDistribution};
use crate::geometry::{cross, orient};
use crate::{Error, Result};

/// Barycentric coordinates at or below this are treated as on the boundary.
pub const BARYCENTRIC_TOL: f64 = 1e-12;

/// `2 |area| <= COLLINEAR_TOL * diam^2` rejects a triangle as collinear.
pub const COLLINEAR_TOL: f64 = 1e-10;

/// Default finite-difference step as a fraction of the triangle diameter.
pub const FD_STEP_FRACTION: f64 = 1e-4;

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

// ---------------------------------------------------------------- two-point

/// Coordinates on the zero-mean two-point family: support
/// `ell (1 - x) e^{i theta}` with probability `x` and `-ell x e^{i theta}`
/// with probability `1 - x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointParams {
    pub ell: f64,
    pub x: f64,
    pub theta: f64,
}

impl TwoPointParams {
    pub fn new(ell: f64, x: f64, theta: f64) -> Result<Self> {
        let p = Self { ell, x, theta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ell.is_finite() && self.ell >= 0.0) {
            return Err(Error::OutOfRange(format!("ell = {} must be finite and >= 0", self.ell)));
        }
        if !(0.0..=1.0).contains(&self.x) {
            return Err(Error::OutOfRange(format!("x = {} must lie in [0, 1]", self.x)));
        }
        if !(-PI..=PI).contains(&self.theta) {
            return Err(Error::OutOfRange(format!("theta = {} must lie in [-pi, pi]", self.theta)));
        }
        Ok(())
    }

    /// The two atoms `(point, prob)`, far point first.
    pub fn atoms(&self) -> [(ComplexValue, f64); 2] {
        let dir = ComplexValue::from_polar(self.ell, self.theta);
        [(dir * (1.0 - self.x), self.x), (-dir * self.x, 1.0 - self.x)]
    }

    /// `x e^{ell (1-x) e^{i theta}} + (1-x) e^{-ell x e^{i theta}}`.
    #[inline]
    pub fn value(&self) -> ComplexValue {
        let [(a, pa), (b, pb)] = self.atoms();
        a.exp() * pa + b.exp() * pb
    }
}

pub fn two_point(params: &TwoPointParams) -> Result<FiniteDistribution> {
    params.validate()?;
    FiniteDistribution::new(params.atoms())
}

/// `Re E e^Z` on the two-point family.
pub fn two_point_objective(params: &TwoPointParams) -> Result<f64> {
    params.validate()?;
    Ok(params.value().re)
}

/// `[ell, x, theta]` box reduced by `(x, theta) ~ (1 - x, pi - theta)` and
/// conjugation, both of which preserve `Re E e^Z` and `|E e^Z - 1|`.
pub fn two_point_box(d: f64) -> [(f64, f64); 3] {
    [(0.0, d), (0.5, 1.0), (0.0, PI)]
}

// ---------------------------------------------------------------- three-point

/// Number of coordinates in a three-point parameter vector.
pub const THREE_POINT_DIM: usize = 6;

/// Zero-mean laws on at most three points, parameterized by
/// `[rho, s, r, r1, r2, r3]`: rotation `rho`, a point
/// `t = (s, (1-s) r, (1-s)(1-r))` of the 2-simplex giving the angular gaps
/// `g_k = pi (1 - t_k)` between consecutive vertices, and vertex radii `r_k`.
/// No gap exceeds `pi`, so the origin is in the closed hull and the
/// probabilities are its barycentric coordinates.
pub fn three_point_box(d: f64) -> [(f64, f64); THREE_POINT_DIM] {
    [(0.0, 2.0 * PI), (0.0, 1.0), (0.0, 1.0), (0.0, d), (0.0, d), (0.0, d)]
}

/// `sin(pi t)` on `[0, 1]`, exactly zero at both ends.
fn sin_pi(t: f64) -> f64 {
    (PI * t.min(1.0 - t)).sin()
}

/// Atoms for a three-point parameter vector, rescaled so the diameter of the
/// atoms with positive mass is at most `d`, or exactly `d` when `pin` is set
/// and the law is not a point mass.
pub fn three_point_atoms(params: &[f64], d: f64, pin: bool) -> [(ComplexValue, f64); 3] {
    let (rho, s, r) = (params[0], params[1].clamp(0.0, 1.0), params[2].clamp(0.0, 1.0));
    let t = [s, (1.0 - s) * r, (1.0 - s) * (1.0 - r)];
    let g = t.map(|tk| PI * (1.0 - tk));
    let radii = [params[3].max(0.0), params[4].max(0.0), params[5].max(0.0)];
    let phi = [rho, rho + g[0], rho + g[0] + g[1]];
    let mut z: [ComplexValue; 3] = std::array::from_fn(|k| ComplexValue::from_polar(radii[k], phi[k]));
    let mut w = [
        radii[1] * radii[2] * sin_pi(t[1]),
        radii[2] * radii[0] * sin_pi(t[2]),
        radii[0] * radii[1] * sin_pi(t[0]),
    ];
    let total: f64 = w.iter().sum();
    if !(total > 0.0) {
        return [(c(0.0, 0.0), 1.0), (c(0.0, 0.0), 0.0), (c(0.0, 0.0), 0.0)];
    }
    w.iter_mut().for_each(|x| *x /= total);
    let mut diam: f64 = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            if w[i] > 0.0 && w[j] > 0.0 {
                diam = diam.max((z[i] - z[j]).norm());
            }
        }
    }
    if diam > 0.0 && (pin || diam > d) {
        let k = d / diam;
        z.iter_mut().for_each(|x| *x *= k);
    }
    [(z[0], w[0]), (z[1], w[1]), (z[2], w[2])]
}

/// `E e^Z` for [`three_point_atoms`].
#[inline]
pub fn three_point_value(params: &[f64], d: f64, pin: bool) -> ComplexValue {
    three_point_atoms(params, d, pin).iter().map(|&(z, p)| z.exp() * p).sum()
}

pub fn three_point(params: &[f64], d: f64, pin: bool) -> Result<FiniteDistribution> {
    if params.len() != THREE_POINT_DIM || params.iter().any(|x| !x.is_finite()) {
        return Err(Error::OutOfRange(format!("three-point parameters must be {THREE_POINT_DIM} finite reals")));
    }
    FiniteDistribution::new(three_point_atoms(params, d, pin))
}

// ---------------------------------------------------------------- triangles

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSupport {
    z: [ComplexValue; 3],
}

impl TriangleSupport {
    pub fn new(z1: ComplexValue, z2: ComplexValue, z3: ComplexValue) -> Result<Self> {
        for z in [z1, z2, z3] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(format!("vertex {z}")));
            }
        }
        let t = Self { z: [z1, z2, z3] };
        let diam = t.diameter();
        if orient(z1, z2, z3).abs() <= COLLINEAR_TOL * diam * diam {
            return Err(Error::Collinear);
        }
        Ok(t)
    }

    pub fn vertices(&self) -> [ComplexValue; 3] {
        self.z
    }

    pub fn diameter(&self) -> f64 {
        let [a, b, cc] = self.z;
        (a - b).norm().max((b - cc).norm()).max((a - cc).norm())
    }

    pub fn translate(&self, t: ComplexValue) -> Result<Self> {
        Self::new(self.z[0] + t, self.z[1] + t, self.z[2] + t)
    }

    /// Barycentric coordinates of `target` (they sum to one).
    pub fn barycentric(&self, target: ComplexValue) -> [f64; 3] {
        let [a, b, cc] = self.z;
        let s = orient(a, b, cc);
        [orient(target, b, cc) / s, orient(a, target, cc) / s, orient(a, b, target) / s]
    }

    /// Whether `target` is strictly inside, with every coordinate above
    /// [`BARYCENTRIC_TOL`].
    pub fn strictly_contains(&self, target: ComplexValue) -> bool {
        self.barycentric(target).iter().all(|&l| l > BARYCENTRIC_TOL)
    }
}

/// The distribution on the triangle's vertices with mean `target`.
///
/// Targets on the boundary are rejected unless `allow_boundary`, in which
/// case vanishing coordinates are zeroed and the result has at most two atoms.
pub fn triangle_dist(
    support: &TriangleSupport,
    target: ComplexValue,
    allow_boundary: bool,
) -> Result<FiniteDistribution> {
    let mut lam = support.barycentric(target);
    if lam.iter().any(|&l| l < -BARYCENTRIC_TOL) {
        return Err(Error::OutsideHull);
    }
    if lam.iter().any(|&l| l <= BARYCENTRIC_TOL) {
        if !allow_boundary {
            return Err(Error::OnBoundary);
        }
        for l in lam.iter_mut() {
            if *l <= BARYCENTRIC_TOL {
                *l = 0.0;
            }
        }
        let s: f64 = lam.iter().sum();
        lam.iter_mut().for_each(|l| *l /= s);
    }
    FiniteDistribution::new(support.z.iter().copied().zip(lam))
}

/// `(A, B, C)` with `E e^{Z(x,y)} = A x + B y + C`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_snake_case)]
pub struct ExpansionCoefficients {
    pub A: ComplexValue,
    pub B: ComplexValue,
    pub C: ComplexValue,
}

impl ExpansionCoefficients {
    /// `A x + B y + C`.
    pub fn affine(&self, x: f64, y: f64) -> ComplexValue {
        self.A * x + self.B * y + self.C
    }

    /// `e^{-x-iy} (A x + B y + C)`.
    pub fn centered_value(&self, x: f64, y: f64) -> ComplexValue {
        (-c(x, y)).exp() * self.affine(x, y)
    }
}

/// Solve the affine map from the mean to `E e^Z` over the triangle.
pub fn expansion_coefficients(support: &TriangleSupport) -> ExpansionCoefficients {
    let z = support.z;
    let s = orient(z[0], z[1], z[2]);
    let mut coeffs = ExpansionCoefficients { A: c(0.0, 0.0), B: c(0.0, 0.0), C: c(0.0, 0.0) };
    for k in 0..3 {
        let (b, cc) = (z[(k + 1) % 3], z[(k + 2) % 3]);
        // lambda_k(x, y) = (cross(b, c) + x (b - c).im - y (b - c).re) / s
        let e = z[k].exp();
        let bc = b - cc;
        coeffs.C += e * (cross(b, cc) / s);
        coeffs.A += e * (bc.im / s);
        coeffs.B += e * (-bc.re / s);
    }
    coeffs
}

// ---------------------------------------------------------------- frames

/// Which functional of `E e^{Z(x,y) - (x+iy)}` is analysed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Functional {
    /// `|. - 1|^2`; stationarity means `A - C`, `B - iC` are real multiples
    /// of `i (C - 1)`.
    ModulusSquared,
    /// `Re .`; stationarity means `A - C`, `B - iC` are purely imaginary.
    RealPart,
}

impl Functional {
    pub fn apply(self, value: ComplexValue) -> f64 {
        match self {
            Functional::ModulusSquared => (value - 1.0).norm_sqr(),
            Functional::RealPart => value.re,
        }
    }
}

/// `(v, w)` from `A = C + i v (C-1)`, `B = iC + i w (C-1)` (modulus) or
/// `A = C + i v`, `B = iC + i w` (real part), with `C = c0 + i c1` and
/// `delta = |C - 1|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryFrame {
    pub v: f64,
    pub w: f64,
    pub c0: f64,
    pub c1: f64,
    pub delta: f64,
    pub convention: Functional,
}

/// Least-squares frame and the norm of the part of `(A - C, B - iC)` that
/// does not fit the stationarity pattern. A residual near zero marks a
/// stationary point of the functional at `(0, 0)`.
pub fn stationary_frame(coeffs: &ExpansionCoefficients, convention: Functional) -> Result<(StationaryFrame, f64)> {
    let ExpansionCoefficients { A, B, C } = *coeffs;
    let (ga, gb) = (A - C, B - c(0.0, 1.0) * C);
    let d = C - 1.0;
    let delta = d.norm();
    let (v, w, residual) = match convention {
        Functional::RealPart => (ga.im, gb.im, ga.re.hypot(gb.re)),
        Functional::ModulusSquared => {
            if delta == 0.0 {
                return Err(Error::DegenerateFrame);
            }
            let dir = c(0.0, 1.0) * d;
            let n2 = dir.norm_sqr();
            let v = (ga * dir.conj()).re / n2;
            let w = (gb * dir.conj()).re / n2;
            (v, w, (ga - dir * v).norm().hypot((gb - dir * w).norm()))
        }
    };
    Ok((StationaryFrame { v, w, c0: C.re, c1: C.im, delta, convention }, residual))
}

/// Symmetric 2x2 real matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym2 {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
}

impl Sym2 {
    pub fn trace(&self) -> f64 {
        self.xx + self.yy
    }

    pub fn det(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let m = 0.5 * (self.xx + self.yy);
        m - (0.5 * (self.xx - self.yy)).hypot(self.xy)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        let m = 0.5 * (self.xx + self.yy);
        m + (0.5 * (self.xx - self.yy)).hypot(self.xy)
    }

    /// `[x, y] M [x, y]^T`.
    pub fn form(&self, x: f64, y: f64) -> f64 {
        self.xx * x * x + 2.0 * self.xy * x * y + self.yy * y * y
    }

    pub fn max_abs_diff(&self, other: &Sym2) -> f64 {
        (self.xx - other.xx).abs().max((self.xy - other.xy).abs()).max((self.yy - other.yy).abs())
    }

    pub fn scale(&self, s: f64) -> Sym2 {
        Sym2 { xx: s * self.xx, xy: s * self.xy, yy: s * self.yy }
    }
}

/// `R = [-c0/2, (c1+v)/2; (c1+v)/2, c0/2 + w]`.
pub fn r_matrix(frame: &StationaryFrame) -> Sym2 {
    Sym2 { xx: -0.5 * frame.c0, xy: 0.5 * (frame.c1 + frame.v), yy: 0.5 * frame.c0 + frame.w }
}

/// `w/2 - sqrt((w + c0)^2 + (v + c1)^2) / 2`, the smallest eigenvalue of
/// [`r_matrix`].
pub fn r_min_eigenvalue(frame: &StationaryFrame) -> f64 {
    0.5 * frame.w - 0.5 * (frame.w + frame.c0).hypot(frame.v + frame.c1)
}

/// `Q = [D v^2 + c0 - c1^2 - c0^2, D v w - c1; D v w - c1, D w^2 + c0 - 1]`
/// with `D = delta`, entry for entry as stated for the modulus functional.
pub fn q_matrix(frame: &StationaryFrame) -> Sym2 {
    let StationaryFrame { v, w, c0, c1, delta, .. } = *frame;
    Sym2 {
        xx: delta * v * v + c0 - c1 * c1 - c0 * c0,
        xy: delta * v * w - c1,
        yy: delta * w * w + c0 - 1.0,
    }
}

/// The claimed trace of [`q_matrix`], `delta (v^2 + w^2 - 1)`.
pub fn q_trace_claim(frame: &StationaryFrame) -> f64 {
    frame.delta * (frame.v * frame.v + frame.w * frame.w - 1.0)
}

/// The claimed determinant of [`q_matrix`],
/// `delta (-w^2 c0^2 - (1 - v^2 - w^2) c0 - (v - w c1)^2)`.
pub fn q_det_claim(frame: &StationaryFrame) -> f64 {
    let StationaryFrame { v, w, c0, c1, delta, .. } = *frame;
    delta * (-w * w * c0 * c0 - (1.0 - v * v - w * w) * c0 - (v - w * c1).powi(2))
}

/// Second-order part of the modulus functional at a modulus-stationary frame,
/// from expanding `e^{-u}` to second order with `u = x + iy` and
/// `D = delta^2`:
/// `[D v^2 + c0 - c0^2 - c1^2, D (vw + v) - c1; ., D (w + 1)^2 + c0 - 1]`.
pub fn q_matrix_expanded(frame: &StationaryFrame) -> Sym2 {
    let StationaryFrame { v, w, c0, c1, delta, .. } = *frame;
    let d2 = delta * delta;
    Sym2 {
        xx: d2 * v * v + c0 - c0 * c0 - c1 * c1,
        xy: d2 * (v * w + v) - c1,
        yy: d2 * (w + 1.0).powi(2) + c0 - 1.0,
    }
}

/// Gradient and quadratic part of the functional at `(0, 0)` for arbitrary
/// (not necessarily stationary) coefficients, from the second-order
/// expansion `f - 1 = (C - 1) + L + S`, `L = (A-C) x + (B-iC) y`,
/// `S = -u (A x + B y) + C u^2 / 2`.
pub fn local_quadratic(coeffs: &ExpansionCoefficients, functional: Functional) -> ([f64; 2], Sym2) {
    let ExpansionCoefficients { A, B, C } = *coeffs;
    let d = C - 1.0;
    let (ga, gb) = (A - C, B - c(0.0, 1.0) * C);
    let q = |x: f64, y: f64| -> f64 {
        let u = c(x, y);
        let s = -u * (A * x + B * y) + C * u * u * 0.5;
        match functional {
            Functional::RealPart => s.re,
            Functional::ModulusSquared => (ga * x + gb * y).norm_sqr() + 2.0 * (d.conj() * s).re,
        }
    };
    let grad = match functional {
        Functional::RealPart => [ga.re, gb.re],
        Functional::ModulusSquared => [2.0 * (d.conj() * ga).re, 2.0 * (d.conj() * gb).re],
    };
    let (xx, yy) = (q(1.0, 0.0), q(0.0, 1.0));
    (grad, Sym2 { xx, xy: 0.5 * (q(1.0, 1.0) - xx - yy), yy })
}

/// The functional of `E e^{Z(x,y) - (x+iy)}` computed directly from the
/// triangle distribution with mean `x + iy`.
pub fn functional_value(support: &TriangleSupport, x: f64, y: f64, functional: Functional) -> Result<f64> {
    let u = c(x, y);
    let dist = triangle_dist(support, u, false)?;
    let v = dist.expect_exp()? * (-u).exp();
    Ok(functional.apply(v))
}

/// Central-difference Hessian of [`functional_value`] at `(0, 0)`, halved so
/// that it is comparable with the quadratic-form matrices.
pub fn hessian_fd(support: &TriangleSupport, functional: Functional, step: Option<f64>) -> Result<Sym2> {
    let h = step.unwrap_or(FD_STEP_FRACTION * support.diameter());
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::OutOfRange(format!("step {h} must be positive")));
    }
    for (sx, sy) in [(0.0, 0.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)] {
        if !support.strictly_contains(c(sx * h, sy * h)) {
            return Err(Error::StencilOutsideHull);
        }
    }
    let f = |x: f64, y: f64| functional_value(support, x, y, functional);
    let f0 = f(0.0, 0.0)?;
    let h2 = h * h;
    let xx = (f(h, 0.0)? - 2.0 * f0 + f(-h, 0.0)?) / (2.0 * h2);
    let yy = (f(0.0, h)? - 2.0 * f0 + f(0.0, -h)?) / (2.0 * h2);
    let xy = (f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (8.0 * h2);
    Ok(Sym2 { xx, xy, yy })
}
