//! Multiprecision scalars: decimal precision settings and a complex type over
//! `rug::Float`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 34;
pub const MIN_DIGITS: u32 = 15;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Working precision in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(Error::InvalidInput(format!(
                "precision must be at least {MIN_DIGITS} decimal digits, got {digits}"
            )));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Mantissa bits for `rug::Float`, with a few guard bits.
    pub fn bits(self) -> u32 {
        (self.digits as f64 * LOG2_10).ceil() as u32 + 4
    }

    /// The same precision widened by `extra` digits.
    pub fn guarded(self, extra: u32) -> Self {
        Precision { digits: self.digits + extra }
    }

    /// `10^(-digits + 5)`: the certification threshold used throughout.
    pub fn tolerance(self) -> f64 {
        10f64.powi(5 - self.digits as i32).max(f64::MIN_POSITIVE)
    }

    pub fn tolerance_float(self) -> Float {
        Float::with_val(self.bits(), 10).pow(5 - self.digits as i32)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: DEFAULT_DIGITS }
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Precision::new(d)
    }
}

impl From<Precision> for u32 {
    fn from(p: Precision) -> u32 {
        p.digits
    }
}

pub fn pi(bits: u32) -> Float {
    Float::with_val(bits, Constant::Pi)
}

/// A complex number with `rug::Float` parts sharing one precision.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {:+}i)", self.re.to_f64(), self.im.to_f64())
    }
}

impl Complex {
    pub fn zero(bits: u32) -> Self {
        Complex { re: Float::new(bits), im: Float::new(bits) }
    }

    pub fn one(bits: u32) -> Self {
        Complex { re: Float::with_val(bits, 1), im: Float::new(bits) }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        Complex { re, im }
    }

    pub fn real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    pub fn imag(im: Float) -> Self {
        let re = Float::new(im.prec());
        Complex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, bits: u32) -> Self {
        Complex { re: Float::with_val(bits, re), im: Float::with_val(bits, im) }
    }

    /// `e^{i theta}`.
    pub fn expi(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        Complex { re: c, im: s }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Complex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Float {
        let mut n = Float::with_val(self.prec(), self.re.square_ref());
        n += &self.im * &self.im;
        n
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn abs_f64(&self) -> f64 {
        self.re.to_f64().hypot(self.im.to_f64())
    }

    pub fn scale(&self, k: &Float) -> Self {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re * k), im: Float::with_val(p, &self.im * k) }
    }

    pub fn div_real(&self, k: &Float) -> Self {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re / k), im: Float::with_val(p, &self.im / k) }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        self.conj().div_real(&n)
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Complex { re: -self.im.clone(), im: self.re.clone() }
    }

    /// `self += a * b`.
    pub fn add_mul(&mut self, a: &Complex, b: &Complex) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        self.re += &a.re * &b.re;
        self.re -= &a.im * &b.im;
        self.im += &a.re * &b.im;
        self.im += &a.im * &b.re;
    }

    /// `self += a * k` for real `k`.
    pub fn add_mul_real(&mut self, a: &Complex, k: &Float) {
        self.re += &a.re * k;
        self.im += &a.im * k;
    }

    pub fn set_prec(&mut self, bits: u32) {
        self.re.set_prec(bits);
        self.im.set_prec(bits);
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        let p = self.prec().max(o.prec());
        Complex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        let p = self.prec().max(o.prec());
        Complex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        let mut out = Complex::zero(self.prec().max(o.prec()));
        out.add_mul(self, o);
        out
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        self * &o.recip()
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&Complex> for Complex {
    fn add_assign(&mut self, o: &Complex) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Complex> for Complex {
    fn sub_assign(&mut self, o: &Complex) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&Complex> for Complex {
    fn mul_assign(&mut self, o: &Complex) {
        *self = &*self * o;
    }
}
