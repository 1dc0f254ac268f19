//! Working precision and error-carrying complex values.
//!
//! Every high-precision quantity travels with a conservative absolute error
//! bound expressed as an `f64`.  The bound covers rounding in the operation
//! that produced it plus the bounds of its inputs.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rug::float::Constant;
use rug::Float;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub const DEFAULT_BITS: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionContext {
    pub working_bits: u32,
    pub target_rel_err: f64,
    pub max_retries: u32,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self::new(DEFAULT_BITS)
    }
}

impl PrecisionContext {
    /// Context with the default target of half the working bits.
    pub fn new(bits: u32) -> Self {
        let bits = bits.max(64);
        Self { working_bits: bits, target_rel_err: (-(f64::from(bits / 2))).exp2(), max_retries: 3 }
    }

    /// Smallest relative target the working precision can honestly deliver.
    pub fn target_floor(bits: u32) -> f64 {
        (-(f64::from(bits) - 8.0)).exp2()
    }

    pub fn with_target(mut self, target: f64) -> Result<Self> {
        if !(target > 0.0 && target < 1.0) {
            return Err(Error::Domain(format!("target_rel_err {target} not in (0,1)")));
        }
        if target < Self::target_floor(self.working_bits) {
            return Err(Error::Domain(format!(
                "target_rel_err {target:e} below 2^-(bits-8) for {} bits",
                self.working_bits
            )));
        }
        self.target_rel_err = target;
        Ok(self)
    }

    pub fn with_retries(mut self, retries: u32) -> Self {
        self.max_retries = retries;
        self
    }

    /// Same target at a different precision.
    pub fn at_bits(&self, bits: u32) -> Self {
        let bits = bits.max(64);
        Self {
            working_bits: bits,
            target_rel_err: self.target_rel_err.max(Self::target_floor(bits)),
            max_retries: self.max_retries,
        }
    }

    pub fn doubled(&self) -> Self {
        self.at_bits(self.working_bits * 2)
    }

    /// Unit roundoff at the working precision.
    pub fn unit(&self) -> f64 {
        unit(self.working_bits)
    }
}

pub fn unit(bits: u32) -> f64 {
    let u = (1.0 - f64::from(bits)).exp2();
    if u == 0.0 {
        f64::MIN_POSITIVE
    } else {
        u
    }
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

pub fn euler_gamma(bits: u32) -> Float {
    Float::with_val(bits, Constant::Euler)
}

pub fn float(bits: u32, x: f64) -> Float {
    Float::with_val(bits, x)
}

pub fn mag(x: &Float) -> f64 {
    x.to_f64().abs()
}

/// Parses a decimal literal at the given precision.
pub fn parse_float(text: &str, bits: u32) -> Result<Float> {
    Float::parse(text.trim())
        .map(|p| Float::with_val(bits, p))
        .map_err(|e| Error::Domain(format!("cannot parse '{text}' as a number: {e}")))
}

#[derive(Clone, Debug)]
pub struct RValue {
    pub value: Float,
    pub err_bound: f64,
}

impl RValue {
    pub fn new(value: Float, err_bound: f64) -> Self {
        Self { value, err_bound }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

#[derive(Clone, Debug)]
pub struct CValue {
    pub re: Float,
    pub im: Float,
    pub err_bound: f64,
}

impl CValue {
    pub fn new(re: Float, im: Float, err_bound: f64) -> Self {
        Self { re, im, err_bound }
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        Self::new(float(bits, re), float(bits, im), 0.0)
    }

    pub fn real(re: Float) -> Self {
        let bits = re.prec();
        Self::new(re, Float::new(bits), 0.0)
    }

    pub fn zero(bits: u32) -> Self {
        Self::new(Float::new(bits), Float::new(bits), 0.0)
    }

    pub fn one(bits: u32) -> Self {
        Self::from_f64(1.0, 0.0, bits)
    }

    pub fn i(bits: u32) -> Self {
        Self::from_f64(0.0, 1.0, bits)
    }

    pub fn from_c64(z: Complex64, bits: u32) -> Self {
        Self::from_f64(z.re, z.im, bits)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Re-rounds both parts to `bits`, charging the rounding to the bound.
    pub fn round_to(&self, bits: u32) -> Self {
        let re = Float::with_val(bits, &self.re);
        let im = Float::with_val(bits, &self.im);
        let extra = if bits < self.prec() { self.abs_f64() * unit(bits) } else { 0.0 };
        Self::new(re, im, self.err_bound + extra)
    }

    pub fn with_err(mut self, extra: f64) -> Self {
        self.err_bound += extra;
        self
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im), self.err_bound)
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * k);
        let im = Float::with_val(p, &self.im * k);
        let km = mag(k);
        let err = self.err_bound * km + 2.0 * self.abs_f64() * km * unit(p);
        Self::new(re, im, err)
    }

    pub fn scale_f64(&self, k: f64) -> Self {
        self.scale(&float(self.prec(), k))
    }

    /// Multiplication by i.
    pub fn mul_i(&self) -> Self {
        Self::new(Float::with_val(self.im.prec(), -&self.im), self.re.clone(), self.err_bound)
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Result<Self> {
        &CValue::one(self.prec()) / self
    }

    /// Checked division; fails when the divisor is not separated from zero.
    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let bm = rhs.abs_f64();
        if rhs.is_zero() || bm <= rhs.err_bound {
            return Err(Error::NearZero("division by a value within its error bound of zero".into()));
        }
        let p = self.prec().max(rhs.prec());
        let den = Float::with_val(p, rhs.re.square_ref()) + Float::with_val(p, rhs.im.square_ref());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re += Float::with_val(p, &self.im * &rhs.im);
        re /= &den;
        let mut im = Float::with_val(p, &self.im * &rhs.re);
        im -= Float::with_val(p, &self.re * &rhs.im);
        im /= &den;
        let am = self.abs_f64();
        let err = (self.err_bound * bm + am * rhs.err_bound) / (bm * (bm - rhs.err_bound)) + 8.0 * (am / bm) * unit(p);
        Ok(Self::new(re, im, err))
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let m = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        let re = Float::with_val(p, &m * &c);
        let im = Float::with_val(p, &m * &s);
        let mm = mag(&m);
        let sens = if self.err_bound > 0.0 { self.err_bound.exp_m1() } else { 0.0 };
        let err = mm * sens + 4.0 * mm * unit(p) * (1.0 + self.abs_f64());
        Self::new(re, im, err)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        let am = self.abs_f64();
        if self.is_zero() || am <= self.err_bound {
            return Err(Error::NearZero("logarithm of a value indistinguishable from zero".into()));
        }
        let p = self.prec();
        let r = self.abs();
        let re = Float::with_val(p, r.ln_ref());
        let im = self.arg();
        let err = self.err_bound / (am - self.err_bound) + 4.0 * unit(p) * (1.0 + mag(&re).max(std::f64::consts::PI));
        Ok(Self::new(re, im, err))
    }

    pub fn sin(&self) -> Self {
        // sin(x+iy) = sin x cosh y + i cos x sinh y
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        let re = Float::with_val(p, &s * &ch);
        let im = Float::with_val(p, &c * &sh);
        let chm = mag(&ch);
        let err = chm * (self.err_bound.exp_m1() + self.err_bound) + 4.0 * chm * unit(p) * (1.0 + self.abs_f64());
        Self::new(re, im, err)
    }

    /// `base^self` for a positive real base given by its logarithm.
    pub fn exp_with_log_base(&self, log_base: &Float) -> Self {
        let lb = mag(log_base);
        let e = CValue::new(
            Float::with_val(self.prec(), &self.re * log_base),
            Float::with_val(self.prec(), &self.im * log_base),
            self.err_bound * lb + 2.0 * self.abs_f64() * lb * unit(self.prec()),
        );
        e.exp()
    }

    /// Decimal rendering of the real part with digits set by the error bound.
    pub fn re_string(&self) -> String {
        crate::format::decimal(&self.re, self.err_bound)
    }

    pub fn im_string(&self) -> String {
        crate::format::decimal(&self.im, self.err_bound)
    }
}

fn combine_add(a: &CValue, b: &CValue, re: Float, im: Float) -> CValue {
    let p = re.prec();
    let mag_out = re.to_f64().hypot(im.to_f64());
    let err = a.err_bound + b.err_bound + 2.0 * mag_out * unit(p);
    CValue::new(re, im, err)
}

impl Add for &CValue {
    type Output = CValue;
    fn add(self, rhs: &CValue) -> CValue {
        let p = self.prec().max(rhs.prec());
        let re = Float::with_val(p, &self.re + &rhs.re);
        let im = Float::with_val(p, &self.im + &rhs.im);
        combine_add(self, rhs, re, im)
    }
}

impl Sub for &CValue {
    type Output = CValue;
    fn sub(self, rhs: &CValue) -> CValue {
        let p = self.prec().max(rhs.prec());
        let re = Float::with_val(p, &self.re - &rhs.re);
        let im = Float::with_val(p, &self.im - &rhs.im);
        combine_add(self, rhs, re, im)
    }
}

impl Mul for &CValue {
    type Output = CValue;
    fn mul(self, rhs: &CValue) -> CValue {
        let p = self.prec().max(rhs.prec());
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        let (am, bm) = (self.abs_f64(), rhs.abs_f64());
        let err = am * rhs.err_bound + bm * self.err_bound + self.err_bound * rhs.err_bound + 6.0 * am * bm * unit(p);
        CValue::new(re, im, err)
    }
}

impl Div for &CValue {
    type Output = Result<CValue>;
    fn div(self, rhs: &CValue) -> Result<CValue> {
        self.checked_div(rhs)
    }
}

impl Neg for &CValue {
    type Output = CValue;
    fn neg(self) -> CValue {
        CValue::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
            self.err_bound,
        )
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $out:ty) => {
        impl $tr for CValue {
            type Output = $out;
            fn $m(self, rhs: CValue) -> $out {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CValue> for CValue {
            type Output = $out;
            fn $m(self, rhs: &CValue) -> $out {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add, CValue);
forward_owned!(Sub, sub, CValue);
forward_owned!(Mul, mul, CValue);
forward_owned!(Div, div, Result<CValue>);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_target_respects_floor() {
        for bits in [53, 64, 128, 256, 1024] {
            let ctx = PrecisionContext::new(bits);
            assert!(ctx.target_rel_err >= PrecisionContext::target_floor(bits));
        }
        assert!(PrecisionContext::new(64).with_target(1e-30).is_err());
    }

    #[test]
    fn arithmetic_matches_double_precision() {
        let a = CValue::from_f64(1.5, -2.0, 128);
        let b = CValue::from_f64(0.25, 3.0, 128);
        let (x, y) = (a.to_c64(), b.to_c64());
        let close = |u: CValue, v: Complex64| (u.to_c64() - v).norm() < 1e-14 * (1.0 + v.norm());
        assert!(close(&a + &b, x + y));
        assert!(close(&a - &b, x - y));
        assert!(close(&a * &b, x * y));
        assert!(close((&a / &b).unwrap(), x / y));
        assert!(close(a.exp(), x.exp()));
        assert!(close(a.ln().unwrap(), x.ln()));
        assert!(close(a.sin(), x.sin()));
    }

    #[test]
    fn error_bounds_cover_precision_loss() {
        let hi = CValue::from_f64(0.3, 0.7, 512).exp();
        let lo = CValue::from_f64(0.3, 0.7, 64).exp();
        let diff = (&hi - &lo.round_to(512)).abs_f64();
        assert!(diff <= lo.err_bound, "{diff:e} vs {:e}", lo.err_bound);
    }

    #[test]
    fn division_by_uncertain_zero_fails() {
        let z = CValue::from_f64(0.0, 0.0, 64);
        assert!(CValue::one(64).checked_div(&z).is_err());
    }
}
