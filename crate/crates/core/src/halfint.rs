//! Exact half-integer quantum numbers.

use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A half-integer `x`, stored as the integer `2x`.
///
/// Used both for the spin `j` and for basis labels `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn as_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn to_rational(self) -> Rational {
        Rational::from((self.twice, 2))
    }

    /// Checks that `self` is usable as a spin quantum number.
    pub fn as_spin(self) -> Result<Spin> {
        Spin::new(self)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `n`, `n/1` and `n/2` (with optional sign).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse '{s}' as a half-integer"));
        let s = s.trim();
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                match den.trim().parse::<i64>().map_err(|_| bad())? {
                    1 => Ok(HalfInt::from_int(num)),
                    2 => Ok(HalfInt::from_twice(num)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

impl From<HalfInt> for String {
    fn from(h: HalfInt) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for HalfInt {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// A validated spin quantum number `j >= 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "HalfInt", try_from = "HalfInt")]
pub struct Spin(HalfInt);

impl Spin {
    pub fn new(j: HalfInt) -> Result<Self> {
        if j.twice < 0 {
            return Err(Error::InvalidInput(format!("spin must be non-negative, got {j}")));
        }
        Ok(Spin(j))
    }

    pub fn from_twice(twice: i64) -> Result<Self> {
        Spin::new(HalfInt::from_twice(twice))
    }

    pub fn value(self) -> HalfInt {
        self.0
    }

    pub fn twice(self) -> i64 {
        self.0.twice
    }

    /// Hilbert-space dimension `2j + 1`.
    pub fn dim(self) -> usize {
        (self.0.twice + 1) as usize
    }

    pub fn is_integer(self) -> bool {
        self.0.is_integer()
    }

    pub fn as_f64(self) -> f64 {
        self.0.as_f64()
    }

    /// `m` labels from `+j` down to `-j`.
    pub fn labels(self) -> impl Iterator<Item = HalfInt> + Clone {
        let t = self.0.twice;
        (0..=t).map(move |k| HalfInt::from_twice(t - 2 * k))
    }

    /// Whether `m` is a valid projection for this spin.
    pub fn admits(self, m: HalfInt) -> bool {
        m.twice.abs() <= self.0.twice && (m.twice - self.0.twice) % 2 == 0
    }

    /// Position of `m` in the descending basis.
    pub fn index_of(self, m: HalfInt) -> Option<usize> {
        self.admits(m).then(|| ((self.0.twice - m.twice) / 2) as usize)
    }

    pub fn label_at(self, index: usize) -> HalfInt {
        HalfInt::from_twice(self.0.twice - 2 * index as i64)
    }

    /// `j(j+1) - m(m+1)` as an exact rational; the square of the `J+` element
    /// taking `m` to `m+1`.
    pub fn raising_sq(self, m: HalfInt) -> Rational {
        let t = self.0.twice;
        let u = m.twice;
        Rational::from((t * (t + 2) - u * (u + 2), 4))
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Spin {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Spin::new(s.parse()?)
    }
}

impl From<Spin> for HalfInt {
    fn from(s: Spin) -> HalfInt {
        s.0
    }
}

impl TryFrom<HalfInt> for Spin {
    type Error = Error;
    fn try_from(h: HalfInt) -> Result<Self> {
        Spin::new(h)
    }
}
