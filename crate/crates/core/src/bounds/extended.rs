//! Arbitrary-precision evaluation of the bound formulas, exactly as written,
//! with no rearrangement for numerical stability. Used as an oracle against
//! the double-precision routines and by `--precision extended` in the CLI.

use astro_float::{BigFloat, Consts, RoundingMode};

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision in bits; 512 bits absorbs the cancellation of the
/// closed forms for every argument down to about 1e-40.
pub const DEFAULT_BITS: usize = 512;

pub struct Oracle {
    bits: usize,
    consts: Consts,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new(DEFAULT_BITS)
    }
}

impl Oracle {
    pub fn new(bits: usize) -> Self {
        Self { bits, consts: Consts::new().expect("constants cache") }
    }

    pub fn num(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    /// `P(X_d = d) = (e^d - 1 - d) / (d (e^d - 1))`.
    pub fn extremal_probability(&mut self, d: f64) -> BigFloat {
        let (one, dd) = (self.num(1.0), self.num(d));
        let ed = self.exp(&dd);
        let em1 = self.sub(&ed, &one);
        let num = self.sub(&em1, &dd);
        let den = self.mul(&dd, &em1);
        self.div(&num, &den)
    }

    /// `G(d)` from the three-exponential closed form.
    pub fn g_function(&mut self, d: f64) -> BigFloat {
        let (one, two, dd) = (self.num(1.0), self.num(2.0), self.num(d));
        let ed = self.exp(&dd);
        let em1 = self.sub(&ed, &one);
        // exponents
        let a_num = self.sub(&em1, &dd);
        let a = self.div(&a_num, &em1).neg();
        let ded = self.mul(&dd, &ed);
        let b_num = self.add(&self.sub(&ded, &ed), &one);
        let b = self.div(&b_num, &em1);
        let two_ded = self.mul(&two, &ded);
        let c_num = self.add(&self.sub(&self.sub(&two_ded, &ed), &dd), &one);
        let c = self.div(&c_num, &em1);
        let (ea, eb, ec) = (self.exp(&a), self.exp(&b), self.exp(&c));
        let top = self.add(&self.sub(&ea, &self.mul(&two, &eb)), &ec);
        let bottom = self.mul(&dd, &em1);
        self.sub(&self.div(&top, &bottom), &one)
    }

    /// `e^{d^2/8} - 1`.
    pub fn envelope(&mut self, d: f64) -> BigFloat {
        let dd = self.num(d);
        let q = self.div(&self.mul(&dd, &dd), &self.num(8.0));
        let e = self.exp(&q);
        self.sub(&e, &self.num(1.0))
    }
}

/// Round to the nearest double.
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    // decimal rendering carries far more digits than f64 needs; parsing rounds correctly
    x.to_string().parse().unwrap_or(f64::NAN)
}
