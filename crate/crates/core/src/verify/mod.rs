//! Executable versions of the module invariants, grouped into suites.
//!
//! Every check draws its random inputs from a ChaCha stream keyed by the
//! suite seed, the check and the sample index, so reports are identical for
//! a given seed regardless of thread count.

pub mod qreport;
pub mod sampling;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::extended::{to_f64, Oracle};
use crate::bounds::{
    envelope, extremal_probability, extremal_two_point, g_function, integral_identity_check, technical_check,
};
use crate::caratheodory::decompose;
use crate::complex_dist::{mix, ComplexValue, FiniteDistribution};
use crate::families::{
    expansion_coefficients, hessian_fd, r_matrix, r_min_eigenvalue, triangle_dist, two_point, two_point_objective,
    Functional, StationaryFrame, Sym2, TriangleSupport, TwoPointParams, FD_STEP_FRACTION,
};
use crate::geometry::{convex_hull, distance_to_boundary, point_in_convex};
use crate::regions::{containment, envelope_excess, sample_region, starlike_check, FamilyClass, DEFAULT_GRID};
use crate::search::{
    compute_d0, minimize_two_point_re, stationary_support, sup_abs_three_point, sup_abs_two_point, DEFAULT_D0_TOL,
    DEFAULT_THREE_POINT_BUDGET, DEFAULT_TWO_POINT_BUDGET,
};
use crate::{exec, Error, Result};

pub use qreport::{q_report, QReport, QRow};
pub use sampling::{random_dist, random_zero_mean};

/// Published critical diameter.
pub const D0_REFERENCE: f64 = 3.120491233;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ComplexDist,
    Bounds,
    Families,
    Search,
    Caratheodory,
    Regions,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 6] =
        [Suite::ComplexDist, Suite::Bounds, Suite::Families, Suite::Search, Suite::Caratheodory, Suite::Regions];

    pub fn name(self) -> &'static str {
        match self {
            Suite::ComplexDist => "complex_dist",
            Suite::Bounds => "bounds",
            Suite::Families => "families",
            Suite::Search => "search",
            Suite::Caratheodory => "caratheodory",
            Suite::Regions => "regions",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::MODULES
            .into_iter()
            .chain([Suite::All])
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("unknown suite {s:?}") })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    /// Adds cross-checks of the bound functions against the 512-bit oracle.
    Extended,
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "double" => Ok(Precision::Double),
            "extended" => Ok(Precision::Extended),
            _ => Err(Error::Parse { line: 0, msg: format!("unknown precision {s:?}") }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    /// Measured margins.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub seed: u64,
    pub checks: Vec<Check>,
    /// Extra tables (margin tables, the Q report summary), one line each.
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.checks.iter().filter(|c| c.passed).count()
    }

    pub fn total(&self) -> usize {
        self.checks.len()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.total()
    }

    pub fn summary_line(&self) -> String {
        format!("PASS {}/{}", self.passed(), self.total())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            s.push_str(&format!("{tag} {}/{}: {}\n", c.suite, c.name, c.detail));
        }
        for n in &self.notes {
            s.push_str(&format!("# {n}\n"));
        }
        s.push_str(&self.summary_line());
        s.push('\n');
        s
    }
}

struct Ctx {
    suite: Suite,
    seed: u64,
    checks: Vec<Check>,
    notes: Vec<String>,
}

impl Ctx {
    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { suite: self.suite, name: name.to_string(), passed, detail });
    }

    /// Records a check whose evaluation itself failed.
    fn push_result(&mut self, name: &str, r: Result<(bool, String)>) {
        match r {
            Ok((p, d)) => self.push(name, p, d),
            Err(e) => self.push(name, false, format!("error: {e}")),
        }
    }

    /// RNG for sample `i` of check number `tag`.
    fn rng(&self, tag: u64, i: usize) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream((tag << 40) | i as u64);
        r
    }

    /// Run `f` on `n` seeded samples in parallel; returns the largest
    /// returned value, or the first error.
    fn sweep<F>(&self, tag: u64, n: usize, f: F) -> Result<f64>
    where
        F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync + Send,
    {
        let out = exec::map_indexed(n, |i| f(&mut self.rng(tag, i)));
        let mut worst = f64::NEG_INFINITY;
        for v in out {
            let v = v?;
            worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
        }
        Ok(worst)
    }
}

pub fn run_suite(suite: Suite, seed: u64, precision: Precision) -> Report {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::MODULES.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    for s in suites {
        let mut ctx = Ctx { suite: s, seed, checks: Vec::new(), notes: Vec::new() };
        match s {
            Suite::ComplexDist => complex_dist_checks(&mut ctx),
            Suite::Bounds => bounds_checks(&mut ctx, precision),
            Suite::Families => families_checks(&mut ctx),
            Suite::Search => search_checks(&mut ctx),
            Suite::Caratheodory => caratheodory_checks(&mut ctx),
            Suite::Regions => regions_checks(&mut ctx),
            Suite::All => unreachable!(),
        }
        checks.append(&mut ctx.checks);
        notes.append(&mut ctx.notes);
    }
    Report { seed, checks, notes }
}

/// Checks of a single user-supplied law, centered first: Jung, support
/// radius, the main bound, the proof-chain inequalities when its diameter is
/// at least 3, and decomposition.
pub fn verify_distribution(dist: &FiniteDistribution, seed: u64) -> Report {
    let z = dist.center();
    let d = z.diameter();
    let mut ctx = Ctx { suite: Suite::ComplexDist, seed, checks: Vec::new(), notes: Vec::new() };
    let jung = z.enclosing_disk().radius - d / 3f64.sqrt();
    ctx.push("jung_radius", jung <= 1e-12, format!("radius - diam/sqrt3 = {jung:.3e}"));
    let rad = z.points().map(|p| p.norm()).fold(0.0, f64::max) - d;
    ctx.push("support_within_diameter", rad <= 1e-12 * d.max(1.0), format!("max |z_k| - d = {rad:.3e}"));
    ctx.suite = Suite::Bounds;
    let r = (|| {
        let gap = (z.expect_exp()? - 1.0).norm() - envelope(d)?;
        Ok((gap <= 1e-9, format!("d = {d:.6}, |E e^Z - 1| - (e^(d^2/8) - 1) = {gap:.3e}")))
    })();
    ctx.push_result("main_theorem", r);
    if d >= 3.0 {
        ctx.suite = Suite::Search;
        let r = proof_chain_terms(&z).map(|(lhs, cs, mb)| {
            (lhs <= mb && lhs <= cs * (1.0 + 1e-12), format!("|E Z e^Z| = {lhs:.6e}, Cauchy-Schwarz {cs:.6e}, 3/4 d e^(d^2/8) = {mb:.6e}"))
        });
        ctx.push_result("proof_chain", r);
    }
    ctx.suite = Suite::Caratheodory;
    let r = (|| {
        let dec = decompose(&z)?;
        let err = atomwise_error(&z, &dec.reconstruct()?);
        let size = dec.components.iter().map(|c| c.1.len()).max().unwrap_or(0);
        Ok((err <= 1e-9 && size <= 3, format!("{} components of at most {size} atoms, atomwise error {err:.3e}", dec.len())))
    })();
    ctx.push_result("reconstruction", r);
    Report { seed, checks: ctx.checks, notes: ctx.notes }
}

fn list(xs: &[f64], prec: usize) -> String {
    xs.iter().map(|x| format!("{x:.prec$e}")).collect::<Vec<_>>().join(", ")
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn atoms_in<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

fn dist_with<R: Rng>(rng: &mut R, lo: usize, hi: usize) -> FiniteDistribution {
    let n = atoms_in(rng, lo, hi);
    random_dist(rng, n)
}

fn zero_mean_with<R: Rng>(rng: &mut R, lo: usize, hi: usize, d: f64) -> FiniteDistribution {
    let n = atoms_in(rng, lo, hi);
    random_zero_mean(rng, n, d)
}

fn diameter_in<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * (1.0 - rng.random::<f64>())
}

/// `|E e^Z - 1|` against the envelope for zero-mean laws with 2 to 10 atoms
/// and diameter in `(0, 10]`; returns the largest excess.
pub fn main_theorem_sweep(samples: usize, seed: u64) -> Result<f64> {
    let ctx = Ctx { suite: Suite::Bounds, seed, checks: Vec::new(), notes: Vec::new() };
    main_theorem_excess(&ctx, samples)
}

fn main_theorem_excess(ctx: &Ctx, samples: usize) -> Result<f64> {
    ctx.sweep(7, samples, |r| {
        let n = atoms_in(r, 2, 10);
        let d = diameter_in(r, 0.0, 10.0);
        let z = random_zero_mean(r, n, d);
        Ok((z.expect_exp()? - 1.0).norm() - envelope(z.diameter())?)
    })
}

fn complex_dist_checks(ctx: &mut Ctx) {
    let r = ctx.sweep(1, 10_000, |r| {
        let z = dist_with(r, 2, 10);
        Ok(z.enclosing_disk().radius - z.diameter() / 3f64.sqrt())
    });
    ctx.push_result(
        "jung_radius",
        r.map(|w| (w <= 1e-12, format!("max radius - diam/sqrt3 = {w:.3e} over 10^4 laws"))),
    );

    let r = ctx.sweep(2, 1_000, |r| {
        let side = r.random_range(0.5..2.0);
        let rot = ComplexValue::from_polar(1.0, r.random_range(0.0..2.0 * PI));
        let shift = c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
        let pts: Vec<ComplexValue> =
            (0..3).map(|k| shift + rot * ComplexValue::from_polar(side / 3f64.sqrt(), 2.0 * PI * k as f64 / 3.0)).collect();
        let z = FiniteDistribution::uniform(&pts)?;
        Ok((z.enclosing_disk().radius - z.diameter() / 3f64.sqrt()).abs())
    });
    ctx.push_result(
        "jung_equilateral",
        r.map(|w| (w <= 1e-12, format!("max |radius - diam/sqrt3| = {w:.3e} on 10^3 equilateral triangles"))),
    );

    let r = ctx.sweep(3, 10_000, |r| {
        let d = diameter_in(r, 0.0, 10.0);
        let z = zero_mean_with(r, 2, 10, d);
        Ok(z.points().map(|p| p.norm()).fold(0.0, f64::max) / z.diameter() - 1.0)
    });
    ctx.push_result(
        "support_within_diameter",
        r.map(|w| (w <= 1e-12, format!("max |z_k|/d - 1 = {w:.3e} over 10^4 zero-mean laws"))),
    );

    let r = ctx.sweep(4, 10_000, |r| {
        let z = dist_with(r, 1, 10);
        let (a, b) = (c(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0)), c(r.random_range(-2.0..2.0), 0.5));
        let lhs = z.expect(|p| a * p.exp() + b * p * p)?;
        let rhs = a * z.expect_exp()? + b * z.moment(2)?;
        let y = dist_with(r, 1, 10);
        let t = r.random_range(0.0..=1.0);
        let m = mix(&[z.clone(), y.clone()], &[t, 1.0 - t])?;
        let lm = m.expect_exp()?;
        let rm = z.expect_exp()? * t + y.expect_exp()? * (1.0 - t);
        Ok(((lhs - rhs).norm() / (1.0 + rhs.norm())).max((lm - rm).norm() / (1.0 + rm.norm())))
    });
    ctx.push_result("expect_linear", r.map(|w| (w <= 1e-12, format!("max relative error {w:.3e}"))));

    let r = ctx.sweep(5, 10_000, |r| {
        let n = atoms_in(r, 2, 10);
        let probs: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
        let s: f64 = probs.iter().sum();
        let z = FiniteDistribution::new((0..n).map(|k| (c(r.random_range(-5.0..5.0), 0.0), probs[k] / s)))?.center();
        let v = z.expect_exp()?;
        Ok((1.0 - v.re).max(v.im.abs()))
    });
    ctx.push_result(
        "real_zero_mean_jensen",
        r.map(|w| (w <= 1e-14, format!("max of (1 - Re E e^X, |Im E e^X|) = {w:.3e}"))),
    );

    let r = ctx.sweep(6, 10_000, |r| {
        let z = dist_with(r, 2, 10);
        let a = c(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let b = c(r.random_range(-3.0..3.0), r.random_range(-3.0..3.0));
        let want = a.norm() * z.diameter();
        Ok((z.affine(a, b)?.diameter() - want).abs() / want.max(1e-300))
    });
    ctx.push_result("diameter_affine", r.map(|w| (w <= 1e-12, format!("max relative error {w:.3e}"))));
}

fn bounds_checks(ctx: &mut Ctx, precision: Precision) {
    let grid: Vec<f64> = (0..10_000).map(|k| 30.0 * k as f64 / 9_999.0).collect();
    let r: Result<(bool, String)> = (|| {
        let g: Vec<f64> = grid.iter().map(|&d| g_function(d)).collect::<Result<_>>()?;
        let min_step = g.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let ok = g[0] == 0.0 && min_step > 0.0 && g.iter().all(|v| v.is_finite() && *v >= 0.0);
        Ok((ok, format!("G(0) = {}, min increment {min_step:.3e} on 10^4 points of [0, 30]", g[0])))
    })();
    ctx.push_result("g_monotone", r);

    let r: Result<(bool, String)> = (|| {
        let mut worst = f64::NEG_INFINITY;
        for &d in &grid[1..] {
            worst = worst.max(g_function(d)?.ln_1p() / (d * d / 8.0) - 1.0);
        }
        Ok((worst <= 1e-14, format!("max log(1+G)/(d^2/8) - 1 = {worst:.3e}")))
    })();
    ctx.push_result("log_g_below_quadratic", r);

    let r: Result<(bool, String)> = (|| {
        let mut worst = f64::NEG_INFINITY;
        for k in 1..=2_000 {
            let d = 20.0 * k as f64 / 2_000.0;
            worst = worst.max(g_function(d)? / envelope(d)? - 1.0);
        }
        Ok((worst <= 0.0, format!("max G/envelope - 1 = {worst:.3e} on (0, 20]")))
    })();
    ctx.push_result("g_below_envelope", r);

    let mut worst = f64::NEG_INFINITY;
    for i in 0..=200 {
        for j in 0..=200 {
            let (x, y) = (i as f64 / 200.0, j as f64 / 200.0);
            worst = worst.max(x * y + ((1.0 - x * x) * (1.0 - y * y)).sqrt() - 1.0);
        }
    }
    ctx.push("averaging_inequality", worst <= 1e-12, format!("max xy + sqrt((1-x^2)(1-y^2)) - 1 = {worst:.3e}"));

    let r = ctx.sweep(8, 10_000, |r| {
        let alpha = diameter_in(r, 0.0, 3.0);
        let n = atoms_in(r, 1, 10);
        let pts: Vec<ComplexValue> = (0..n)
            .map(|_| ComplexValue::from_polar(alpha * r.random::<f64>().sqrt(), r.random_range(0.0..2.0 * PI)))
            .collect();
        let probs: Vec<f64> = (0..n).map(|_| r.random_range(0.05..1.0)).collect();
        let s: f64 = probs.iter().sum();
        let z = FiniteDistribution::new(pts.into_iter().zip(probs.iter().map(|p| p / s)))?.center();
        let a = z.points().map(|p| p.norm()).fold(0.0, f64::max);
        let bound = (a * a / 2.0).exp_m1();
        Ok((z.expect_exp()? - 1.0).norm() - bound - 1e-15 * (1.0 + bound))
    });
    ctx.push_result(
        "centered_radius_bound",
        r.map(|w| (w <= 0.0, format!("max |E e^(Z-EZ) - 1| - (e^(a^2/2) - 1) = {w:.3e}"))),
    );

    let r: Result<(bool, String)> = (|| {
        let mut all = true;
        let (mut m1, mut t1, mut m2, mut t2) = (f64::INFINITY, 0.0, f64::INFINITY, 0.0);
        let (mut r1, mut r2) = (f64::INFINITY, f64::INFINITY);
        for k in 0..1_000 {
            let t = 3.0 + 27.0 * k as f64 / 999.0;
            let b = technical_check(t)?;
            all &= b.tech1_ok && b.tech2_ok;
            let e = (t * t / 8.0).exp();
            if b.tech1_margin < m1 {
                (m1, t1) = (b.tech1_margin, t);
            }
            if b.tech2_margin < m2 {
                (m2, t2) = (b.tech2_margin, t);
            }
            r1 = r1.min(b.tech1_margin / e);
            r2 = r2.min(b.tech2_margin / e);
            if k % 111 == 0 || k == 999 {
                ctx.notes.push(format!(
                    "tech t={t:.4} tech1_margin={:.6e} tech2_margin={:.6e}",
                    b.tech1_margin, b.tech2_margin
                ));
            }
        }
        Ok((
            all,
            format!(
                "10^3 points on [3, 30]: min tech1 margin {m1:.6e} at t={t1:.4}, min tech2 margin {m2:.6e} at t={t2:.4}; \
                 min margins over e^(t^2/8): {r1:.6e}, {r2:.6e}"
            ),
        ))
    })();
    ctx.push_result("technical_margins", r);

    let r: Result<(bool, String)> = (|| {
        let res: Vec<f64> = [3.0, 5.0, 10.0].iter().map(|&d| integral_identity_check(d)).collect::<Result<_>>()?;
        Ok((
            res[0] <= 1e-8 && res[1] <= 1e-9 && res[2] <= 1e-8,
            format!("residuals d=3: {:.3e}, d=5: {:.3e}, d=10: {:.3e}", res[0], res[1], res[2]),
        ))
    })();
    ctx.push_result("integral_identity", r);

    let r: Result<(bool, String)> = series_ratios().map(|ratios| {
        let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        (lo > 0.0 && hi <= 2.0 * lo, format!("(G - d^2/8 - 7d^4/1152)/d^6 at d=0.05, 0.1, 0.2: {}", list(&ratios, 6)))
    });
    ctx.push_result("series_remainder", r);

    let r: Result<(bool, String)> = (|| {
        let mut worst: f64 = 0.0;
        for d in [0.5, 1.0, 2.0, 3.0, 5.0] {
            let g = g_function(d)?;
            worst = worst.max((extremal_two_point(d)?.center().expect_exp()? - 1.0 - g).norm());
        }
        Ok((worst <= 1e-10, format!("max |E e^(X_d - E X_d) - 1 - G(d)| = {worst:.3e} for d in 0.5, 1, 2, 3, 5")))
    })();
    ctx.push_result("extremal_attains_g", r);

    let r = main_theorem_excess(ctx, 100_000);
    ctx.push_result(
        "main_theorem",
        r.map(|w| (w <= 1e-9, format!("max |E e^Z - 1| - (e^(d^2/8) - 1) = {w:.3e} over 10^5 laws"))),
    );

    if precision == Precision::Extended {
        let r: Result<(bool, String)> = (|| {
            let mut o = Oracle::default();
            let (mut eg, mut ep): (f64, f64) = (0.0, 0.0);
            for k in 0..200 {
                let d = 10f64.powf(-5.0 + 6.5 * k as f64 / 199.0);
                let g = to_f64(&o.g_function(d));
                eg = eg.max((g_function(d)? - g).abs() / g);
                let p = to_f64(&o.extremal_probability(d));
                ep = ep.max((extremal_probability(d)? - p).abs() / p);
            }
            Ok((eg <= 1e-13 && ep <= 1e-13, format!("512-bit oracle on [1e-5, 10^1.5]: G rel err {eg:.3e}, P(X_d=d) rel err {ep:.3e}")))
        })();
        ctx.push_result("extended_oracle", r);
    }
}

/// `(G(d) - d^2/8 - 7 d^4/1152) / d^6` at `d = 0.05, 0.1, 0.2`.
pub fn series_ratios() -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (o, d) in out.iter_mut().zip([0.05f64, 0.1, 0.2]) {
        *o = (g_function(d)? - d * d / 8.0 - 7.0 * d.powi(4) / 1152.0) / d.powi(6);
    }
    Ok(out)
}

/// Smallest eigenvalue by one Jacobi rotation.
pub fn jacobi_min_eigenvalue(m: &Sym2) -> f64 {
    let phi = 0.5 * (2.0 * m.xy).atan2(m.xx - m.yy);
    let (s, co) = phi.sin_cos();
    let a = co * co * m.xx + 2.0 * s * co * m.xy + s * s * m.yy;
    let b = s * s * m.xx - 2.0 * s * co * m.xy + co * co * m.yy;
    a.min(b)
}

fn random_frame<R: Rng>(r: &mut R, c0: (f64, f64)) -> StationaryFrame {
    let c0 = r.random_range(c0.0..c0.1);
    let c1 = r.random_range(-3.0..3.0);
    StationaryFrame {
        v: r.random_range(-3.0..3.0),
        w: r.random_range(-3.0..3.0),
        c0,
        c1,
        delta: (c0 - 1.0).hypot(c1),
        convention: Functional::RealPart,
    }
}

fn random_triangle<R: Rng>(r: &mut R) -> TriangleSupport {
    loop {
        let z: Vec<ComplexValue> = (0..3).map(|_| c(r.random_range(-2.0..2.0), r.random_range(-2.0..2.0))).collect();
        if let Ok(t) = TriangleSupport::new(z[0], z[1], z[2]) {
            return t;
        }
    }
}

fn random_interior<R: Rng>(r: &mut R, t: &TriangleSupport) -> ComplexValue {
    let w: Vec<f64> = (0..3).map(|_| r.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    t.vertices().iter().zip(&w).map(|(z, wi)| z * (wi / s)).sum()
}

fn families_checks(ctx: &mut Ctx) {
    let r = ctx.sweep(10, 10_000, |r| {
        let p = TwoPointParams::new(r.random_range(0.0..10.0), r.random_range(0.0..1.0), r.random_range(-PI..PI))?;
        let z = two_point(&p)?;
        let scale = p.ell.max(1.0);
        let [(a, pa), (b, pb)] = p.atoms();
        let direct = (a.exp() * pa + b.exp() * pb).re;
        Ok((z.mean().norm() / scale)
            .max((z.diameter() - p.ell).abs() / scale)
            .max((two_point_objective(&p)? - direct).abs() / (1.0 + direct.abs()) * 10.0))
    });
    ctx.push_result(
        "two_point_invariants",
        r.map(|w| (w <= 1e-12, format!("max scaled |mean|, |diam - ell|, 10 x objective error = {w:.3e}"))),
    );

    let r = ctx.sweep(11, 10_000, |r| {
        let t0 = random_triangle(r);
        let t = t0.translate(-random_interior(r, &t0))?;
        let coeffs = expansion_coefficients(&t);
        let u = random_interior(r, &t);
        let direct = triangle_dist(&t, u, false)?.expect_exp()?;
        Ok((coeffs.affine(u.re, u.im) - direct).norm() / (1.0 + direct.norm()))
    });
    ctx.push_result(
        "affine_exactness",
        r.map(|w| (w <= 1e-12, format!("max |Ax + By + C - E e^Z(x,y)| (relative) = {w:.3e}"))),
    );

    let r = ctx.sweep(12, 10_000, |r| {
        let f = random_frame(r, (-3.0, 3.0));
        let direct = jacobi_min_eigenvalue(&r_matrix(&f));
        Ok((r_min_eigenvalue(&f) - direct).abs() / (1.0 + direct.abs()))
    });
    ctx.push_result(
        "r_eigenvalue_closed_form",
        r.map(|w| (w <= 1e-12, format!("max relative gap to Jacobi eigensolve {w:.3e} on 10^4 frames"))),
    );

    let r = ctx.sweep(13, 10_000, |r| Ok(r_min_eigenvalue(&random_frame(r, (1e-6, 3.0)))));
    ctx.push_result(
        "r_negative_for_positive_c0",
        r.map(|w| (w < 0.0, format!("largest min eigenvalue with c0 > 0: {w:.3e}"))),
    );

    let r: Result<(bool, String)> = (|| {
        let (mut err, mut tol, mut res): (f64, f64, f64) = (0.0, 1e-4, 0.0);
        for k in 0..8 {
            let p = stationary_support(Functional::RealPart, ctx.seed.wrapping_add(k))?;
            let step = FD_STEP_FRACTION * p.support.diameter();
            tol = tol.max(10.0 * step * step);
            res = res.max(p.residual);
            err = err.max(hessian_fd(&p.support, Functional::RealPart, None)?.max_abs_diff(&r_matrix(&p.frame)));
        }
        Ok((res < 1e-8 && err <= tol, format!("8 stationary supports: max residual {res:.3e}, max |FD - R| {err:.3e} (tol {tol:.1e})")))
    })();
    ctx.push_result("fd_hessian_matches_r", r);

    let r = ctx.sweep(14, 1_000, |r| {
        let mut xs = [r.random_range(-2.0..-0.1), r.random_range(-2.0..2.0), r.random_range(0.1..2.0)];
        xs.sort_by(f64::total_cmp);
        let probs: Vec<f64> = (0..3).map(|_| r.random_range(0.05..1.0)).collect();
        let s: f64 = probs.iter().sum();
        let rot = ComplexValue::from_polar(1.0, r.random_range(0.0..2.0 * PI));
        let z = FiniteDistribution::new(xs.iter().zip(&probs).map(|(x, p)| (rot * x, p / s)))?.center();
        let dec = decompose(&z)?;
        let mut bad = 0.0f64;
        for (_, comp) in &dec.components {
            if comp.len() > 2 {
                bad = f64::INFINITY;
            }
            bad = bad.max(comp.mean().norm());
        }
        Ok(bad.max(atomwise_error(&z, &dec.reconstruct()?)))
    });
    ctx.push_result(
        "collinear_two_point_mixture",
        r.map(|w| (w <= 1e-9, format!("components have <= 2 atoms; max |mean| and reconstruction error {w:.3e}"))),
    );

    match q_report(8, ctx.seed) {
        Ok(q) => ctx.notes.extend(q.summary_lines()),
        Err(e) => ctx.notes.push(format!("Q report unavailable: {e}")),
    }
}

/// Largest probability difference between two laws matched atom by atom;
/// infinite when the supports differ.
pub fn atomwise_error(a: &FiniteDistribution, b: &FiniteDistribution) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.atoms()
        .iter()
        .map(|x| match b.atoms().iter().find(|y| y.point == x.point) {
            Some(y) => (x.prob - y.prob).abs(),
            None => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

/// `|E Z e^Z|`, the Cauchy-Schwarz bound `sqrt(E|Z|^2 Var e^Z)` and
/// `3/4 d e^{d^2/8}` for a zero-mean law of diameter `d`.
pub fn proof_chain_terms(z: &FiniteDistribution) -> Result<(f64, f64, f64)> {
    let d = z.diameter();
    let lhs = z.expect(|p| p * p.exp())?.norm();
    let m2 = z.expect(|p| c(p.norm_sqr(), 0.0))?.re;
    let e = z.expect_exp()?;
    let e2 = z.expect(|p| c((2.0 * p.re).exp(), 0.0))?.re;
    let cs = (m2 * (e2 - e.norm_sqr()).max(0.0)).sqrt();
    Ok((lhs, cs, 0.75 * d * (d * d / 8.0).exp()))
}

fn search_checks(ctx: &mut Ctx) {
    let r: Result<(bool, String)> = (|| {
        let vals: Vec<f64> = (0..7)
            .map(|k| minimize_two_point_re(1.0 + 0.5 * k as f64, DEFAULT_TWO_POINT_BUDGET).map(|o| o.best_value))
            .collect::<Result<_>>()?;
        let worst = vals.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        Ok((worst <= 1e-12, format!("inf Re on d = 1, 1.5, ..., 4: {vals:.6?}")))
    })();
    ctx.push_result("infimum_monotone", r);

    let r: Result<(bool, String)> = (|| {
        let mut gaps = Vec::new();
        for d in [1.0, 2.0, 3.0] {
            let s3 = sup_abs_three_point(d, DEFAULT_THREE_POINT_BUDGET, ctx.seed)?.best_value;
            let s2 = sup_abs_two_point(d, DEFAULT_TWO_POINT_BUDGET)?.best_value;
            gaps.push(s3 - s2);
        }
        let worst = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok((worst <= 1e-5, format!("sup3 - sup2 at d = 1, 2, 3: {}", list(&gaps, 3))))
    })();
    ctx.push_result("three_point_below_two_point", r);

    let r = ctx.sweep(20, 1_000, |r| {
        let z = {
            let d = r.random_range(3.0..=8.0);
            zero_mean_with(r, 2, 10, d)
        };
        let (lhs, cs, mb) = proof_chain_terms(&z)?;
        let disk = z.enclosing_disk();
        let m2 = z.expect(|p| c(p.norm_sqr(), 0.0))?.re;
        let d = z.diameter();
        let jung = m2 - (d * d / 3.0 - disk.center.norm_sqr());
        Ok((lhs / mb - 1.0).max(lhs / cs - 1.0 - 1e-12).max(jung / (d * d) - 1e-12))
    });
    ctx.push_result(
        "proof_chain",
        r.map(|w| {
            (w <= 0.0, format!("max over |E Z e^Z|/(3/4 d e^(d^2/8)) - 1, Cauchy-Schwarz and E|Z|^2 <= d^2/3 - |a|^2 excesses: {w:.3e}"))
        }),
    );

    let r: Result<(bool, String)> = (|| {
        let a = sup_abs_three_point(2.0, 20_000, ctx.seed)?;
        let b = sup_abs_three_point(2.0, 20_000, ctx.seed)?;
        Ok((a.refinement_history == b.refinement_history, format!("{} history entries compared", a.refinement_history.len())))
    })();
    ctx.push_result("deterministic_history", r);

    let r: Result<(bool, String)> = compute_d0(DEFAULT_D0_TOL, DEFAULT_TWO_POINT_BUDGET).map(|d0| {
        let p = d0.extremal_params;
        (
            (d0.d0 - D0_REFERENCE).abs() <= 1e-6,
            format!("d0 = {:.10} (bracket width {:.1e}), extremal ell={:.9} x={:.9} theta={:.10}", d0.d0, d0.bracket.1 - d0.bracket.0, p.ell, p.x, p.theta),
        )
    });
    ctx.push_result("critical_diameter", r);
}

fn caratheodory_checks(ctx: &mut Ctx) {
    let r = ctx.sweep(30, 10_000, |r| {
        let z = {
            let d = diameter_in(r, 0.0, 10.0);
            zero_mean_with(r, 3, 10, d)
        };
        let dec = decompose(&z)?;
        let (mut size, mut mean, mut diam) = (0usize, 0.0f64, 0.0f64);
        let mut weighted = ComplexValue::new(0.0, 0.0);
        let mut bound = 0.0;
        for (w, comp) in &dec.components {
            size = size.max(comp.len());
            mean = mean.max(comp.mean().norm());
            diam = diam.max(comp.diameter() - z.diameter());
            let e = comp.expect_exp()?;
            weighted += e * *w;
            bound += w * (e - 1.0).norm();
        }
        let total = z.expect_exp()?;
        let transport = (total - weighted).norm() / (1.0 + total.norm());
        let bound_excess = (total - 1.0).norm() - bound - 1e-10 * (1.0 + bound);
        Ok([
            atomwise_error(&z, &dec.reconstruct()?) / 1e-9,
            if size <= 3 { 0.0 } else { f64::INFINITY },
            mean / (1e-9 * z.diameter().max(1.0)),
            transport / 1e-10,
            diam / (1e-12 * z.diameter().max(1.0)),
            if bound_excess <= 0.0 { 0.0 } else { f64::INFINITY },
        ]
        .into_iter()
        .fold(0.0, f64::max))
    });
    ctx.push_result(
        "reconstruction",
        r.map(|w| {
            (
                w <= 1.0,
                format!("10^4 laws: worst error over tolerance (atomwise 1e-9, mean 1e-9, transport 1e-10, diameter) = {w:.3e}"),
            )
        }),
    );
}

fn regions_checks(ctx: &mut Ctx) {
    let r: Result<(bool, String)> = (|| {
        let mut worst = f64::NEG_INFINITY;
        for class in [FamilyClass::TwoPoint, FamilyClass::ThreePoint] {
            for d in [1.0, 3.0, 5.0] {
                let cloud = sample_region(d, class, 100_000, ctx.seed)?;
                if !cloud.points.contains(&c(1.0, 0.0)) {
                    return Ok((false, format!("point 1 missing at d={d}")));
                }
                worst = worst.max(envelope_excess(&cloud)?);
            }
        }
        Ok((worst <= 1e-9, format!("max |p - 1| - envelope = {worst:.3e}; point 1 present in every cloud")))
    })();
    ctx.push_result("cloud_within_envelope", r);

    let r: Result<(bool, String)> = (|| {
        let mut gaps = Vec::new();
        for d in [1.0, 2.0, 3.0] {
            let cloud = sample_region(d, FamilyClass::TwoPoint, 1_000_000, ctx.seed)?;
            let m = cloud.points.iter().map(|p| (p - 1.0).norm()).fold(0.0, f64::max);
            gaps.push(g_function(d)? - m);
        }
        let worst = gaps.iter().map(|g| g.abs()).fold(0.0, f64::max);
        Ok((worst <= 1e-3, format!("G(d) - max |p - 1| at d = 1, 2, 3 with 10^6 samples: {}", list(&gaps, 3))))
    })();
    ctx.push_result("two_point_cloud_reaches_g", r);

    let r: Result<(bool, String)> = (|| {
        let cloud = sample_region(3.0, FamilyClass::ThreePoint, 10_000, ctx.seed)?;
        let s = starlike_check(&cloud, 1_000, ctx.seed)?;
        Ok((
            s.passed == s.checked,
            format!("{}/{} mixtures on the segment, max error {:.3e}, max diameter excess {:.3e}", s.passed, s.checked, s.max_value_error, s.max_diameter_excess),
        ))
    })();
    ctx.push_result("starlike", r);

    let r: Result<(bool, String)> = (|| {
        let mut outside = Vec::new();
        let mut hull_gap: f64 = 0.0;
        for d in [2.0, 3.0] {
            let two = sample_region(d, FamilyClass::TwoPoint, 1_000_000, ctx.seed)?;
            let three = sample_region(d, FamilyClass::ThreePoint, 1_000_000, ctx.seed)?;
            let rep = containment(&two.points, &three.points, DEFAULT_GRID, 2)?;
            outside.push(rep.outside);
            let h3 = convex_hull(&three.points);
            let h2 = convex_hull(&two.points);
            let (lo, hi) = h3.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| (a.min(p.re), b.max(p.re)));
            let cell = (hi - lo) / DEFAULT_GRID as f64;
            for p in h2 {
                if !point_in_convex(p, &h3) {
                    hull_gap = hull_gap.max(distance_to_boundary(p, &h3) / cell);
                }
            }
        }
        Ok((
            outside.iter().all(|&n| n == 0) && hull_gap <= 2.0,
            format!("two-point points outside the three-point region (2 cells) at d = 2, 3: {outside:?}; two-point hull beyond three-point hull by {hull_gap:.3} cells"),
        ))
    })();
    ctx.push_result("two_point_inside_three_point", r);

    let r: Result<(bool, String)> = (|| {
        let min_re = |d: f64| -> Result<f64> {
            let cloud = sample_region(d, FamilyClass::ThreePoint, 1_000_000, ctx.seed)?;
            Ok(cloud.points.iter().map(|p| p.re).fold(f64::INFINITY, f64::min))
        };
        let (a, b) = (min_re(3.0)?, min_re(3.25)?);
        Ok((a > 0.0 && b < 0.0, format!("min Re at d=3: {a:.6}, at d=3.25: {b:.6}")))
    })();
    ctx.push_result("min_real_crosses_zero", r);
}
