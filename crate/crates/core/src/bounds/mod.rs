//! Closed-form bound functions: the exponential envelope `e^{d^2/8} - 1`,
//! Hoeffding's tight extremal function `G(d)`, the extremal two-point law
//! `X_d`, and the auxiliary inequalities used to extend the complex bound to
//! large diameters.

pub mod extended;

use crate::complex_dist::{ComplexValue, FiniteDistribution};
use crate::{Error, Result};

/// Below this diameter `g_function` switches to its Taylor polynomial; the
/// closed form loses digits to cancellation of three O(1) exponentials.
pub const G_SERIES_THRESHOLD: f64 = 1e-3;

/// `technical_check` accepts arguments down to here, flagged as below the
/// `t >= 3` hypothesis.
pub const TECHNICAL_MIN_T: f64 = 2.9;

fn check_nonneg(d: f64, what: &str) -> Result<()> {
    if d.is_nan() || d < 0.0 {
        Err(Error::OutOfRange(format!("{what} must be >= 0, got {d}")))
    } else {
        Ok(())
    }
}

/// `e^d - 1 - d` without cancellation.
fn exp_minus_linear(d: f64) -> f64 {
    if d.abs() < 1.0 {
        let mut term = d * d / 2.0;
        let mut sum = 0.0_f64;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            sum += term;
            k += 1.0;
            term *= d / k;
        }
        sum
    } else {
        d.exp_m1() - d
    }
}

/// `e^{d^2/8} - 1`.
pub fn envelope(d: f64) -> Result<f64> {
    check_nonneg(d, "diameter")?;
    Ok((d * d / 8.0).exp_m1())
}

/// `P(X_d = d) = (e^d - 1 - d) / (d (e^d - 1))`.
pub fn extremal_probability(d: f64) -> Result<f64> {
    if d.is_nan() || d <= 0.0 {
        return Err(Error::OutOfRange(format!("diameter must be > 0, got {d}")));
    }
    Ok(if d < 1.0 {
        exp_minus_linear(d) / (d * d.exp_m1())
    } else {
        1.0 / d - 1.0 / d.exp_m1()
    })
}

/// The extremal law `X_d` on `{0, d}` with `P(X_d = d)` from
/// [`extremal_probability`].
pub fn extremal_two_point(d: f64) -> Result<FiniteDistribution> {
    let p = extremal_probability(d)?;
    FiniteDistribution::new([(ComplexValue::new(0.0, 0.0), 1.0 - p), (ComplexValue::new(d, 0.0), p)])
}

/// Up to here `log(1 + G)` is summed from its Bernoulli-number series, which
/// converges for `d < 2 pi`.
const LOG_SERIES_LIMIT: f64 = 2.0;

/// `B_2, B_4, ..., B_40`.
const BERNOULLI_EVEN: [f64; 20] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
];

/// `log(1 + G(d)) = log((e^d - 1)/d) - 1 + d/(e^d - 1)
///               = sum_k B_2k (2k + 1) d^2k / (2k (2k)!)`.
fn log1p_g_series(d: f64) -> f64 {
    let d2 = d * d;
    let mut pow_over_fact = 1.0;
    let mut terms = [0.0; 20];
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let n = 2.0 * (k as f64 + 1.0);
        pow_over_fact *= d2 / ((n - 1.0) * n);
        terms[k] = b * (n + 1.0) / n * pow_over_fact;
    }
    // smallest terms first
    terms.iter().rev().sum()
}

/// `G(d) = E e^{X_d - E X_d} - 1`.
///
/// The closed form simplifies to `G(d) + 1 = e^{-m} (e^d - 1) / d` with
/// `m = E X_d = 1 - d / (e^d - 1)`; it is evaluated in log space, from a
/// series for moderate `d` and from the cancellation-free `e^d - 1 - d` above. Below [`G_SERIES_THRESHOLD`] the series
/// `d^2/8 + 7 d^4/1152` is used.
pub fn g_function(d: f64) -> Result<f64> {
    check_nonneg(d, "diameter")?;
    if d < G_SERIES_THRESHOLD {
        let d2 = d * d;
        return Ok(d2 / 8.0 + 7.0 * d2 * d2 / 1152.0);
    }
    let log1p_g = if d < LOG_SERIES_LIMIT {
        log1p_g_series(d)
    } else if d <= 30.0 {
        let em1 = d.exp_m1();
        let n = exp_minus_linear(d);
        (n / d).ln_1p() - n / em1
    } else {
        let m = 1.0 - d / d.exp_m1();
        d + (-(-d).exp()).ln_1p() - d.ln() - m
    };
    Ok(log1p_g.exp_m1())
}

/// Slack in the two auxiliary inequalities at argument `t`:
/// `G(t) + 1 <= 0.9 e^{t^2/8}` and `sqrt(G(2t) + 1) <= 1.65 e^{t^2/8}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub d: f64,
    pub g_value: f64,
    pub envelope_value: f64,
    pub tech1_ok: bool,
    pub tech2_ok: bool,
    /// `1.65 e^{t^2/8} - sqrt(G(2t) + 1)`
    pub tech1_margin: f64,
    /// `0.9 e^{t^2/8} - (G(t) + 1)`
    pub tech2_margin: f64,
    /// Set when `t < 3`, where the inequalities are not claimed.
    pub below_hypothesis: bool,
}

pub fn technical_check(t: f64) -> Result<BoundReport> {
    if t.is_nan() || t < TECHNICAL_MIN_T {
        return Err(Error::OutOfRange(format!("technical_check needs t >= 3 (>= {TECHNICAL_MIN_T} flagged), got {t}")));
    }
    let g_value = g_function(t)?;
    let envelope_value = envelope(t)?;
    let e = (t * t / 8.0).exp();
    let tech2_margin = 0.9 * e - (g_value + 1.0);
    let tech1_margin = 1.65 * e - (g_function(2.0 * t)? + 1.0).sqrt();
    Ok(BoundReport {
        d: t,
        g_value,
        envelope_value,
        tech1_ok: tech1_margin > 0.0,
        tech2_ok: tech2_margin > 0.0,
        tech1_margin,
        tech2_margin,
        below_hypothesis: t < 3.0,
    })
}

/// Residual `|LHS - RHS|` of
/// `e^{9/8} - 1 + int_{3/d}^1 (d^2 s / 4) e^{d^2 s^2 / 8} ds = e^{d^2/8} - 1`,
/// with the integral computed by Clenshaw-Curtis quadrature.
pub fn integral_identity_check(d: f64) -> Result<f64> {
    if d.is_nan() || d < 3.0 {
        return Err(Error::OutOfRange(format!("integral identity needs d >= 3, got {d}")));
    }
    let rhs = envelope(d)?;
    let base = envelope(3.0)?;
    let lo = 3.0 / d;
    if lo >= 1.0 {
        return Ok((base - rhs).abs());
    }
    let d2 = d * d;
    let integrand = |s: f64| 0.25 * d2 * s * (d2 * s * s / 8.0).exp();
    let out = quadrature::clenshaw_curtis::integrate(integrand, lo, 1.0, 1e-16 * (1.0 + rhs));
    if !(out.error_estimate <= 1e-11 * (1.0 + rhs)) {
        return Err(Error::Quadrature(out.error_estimate));
    }
    let integral = out.integral;
    Ok((base + integral - rhs).abs())
}
