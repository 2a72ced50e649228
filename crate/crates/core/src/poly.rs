//! Dense univariate polynomials over the integers and the rationals, in the
//! variable λ. Coefficients are stored in ascending degree and kept trimmed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mp::Complex;

fn pow_int(base: &Integer, e: u32) -> Integer {
    base.clone().pow(e)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<Integer>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<Integer>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// From coefficients listed highest degree first, as polynomials are
    /// usually written.
    pub fn from_descending(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().rev().map(|&c| Integer::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<Integer>) -> Self {
        Self::new(vec![c.into()])
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// `λ^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Integer::new(); k + 1];
        c[k] = Integer::from(1);
        IntPolynomial { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Integer {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn scale(&self, k: &Integer) -> Self {
        Self::new(self.coeffs.iter().map(|c| Integer::from(c * k)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Integer::from(c * k as u64))
                .collect(),
        )
    }

    /// gcd of the coefficients (non-negative).
    pub fn content(&self) -> Integer {
        self.coeffs.iter().fold(Integer::new(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        let g = self.content();
        if g == 0 {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|c| Integer::from(c.div_exact_ref(&g))).collect())
    }

    /// Exact division by an integer that divides every coefficient.
    pub fn div_exact(&self, d: &Integer) -> Self {
        Self::new(self.coeffs.iter().map(|c| Integer::from(c.div_exact_ref(d))).collect())
    }

    /// Largest `k` such that `λ^k` divides `self` (0 for the zero polynomial).
    pub fn lambda_valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == 0).count().min(self.coeffs.len())
    }

    /// `self / λ^k`; the caller guarantees `k <= lambda_valuation()`.
    pub fn strip_lambda(&self, k: usize) -> Self {
        Self::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    /// Only even powers of λ appear.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|c| *c == 0)
    }

    /// Only odd powers of λ appear.
    pub fn is_odd(&self) -> bool {
        self.coeffs.iter().step_by(2).all(|c| *c == 0)
    }

    /// For an even polynomial `q(λ) = r(λ²)`, returns `r`.
    pub fn to_mu(&self) -> Result<Self> {
        if !self.is_even() {
            return Err(Error::InvalidInput("polynomial is not even in λ".into()));
        }
        Ok(Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// `r(μ) ↦ r(λ²)`.
    pub fn from_mu(mu: &IntPolynomial) -> Self {
        let mut c = vec![Integer::new(); 2 * mu.coeffs.len()];
        for (k, a) in mu.coeffs.iter().enumerate() {
            c[2 * k] = a.clone();
        }
        Self::new(c)
    }

    /// `sign · Π factor^power`.
    pub fn from_factors(sign: i32, factors: &[(IntPolynomial, u32)]) -> Self {
        factors
            .iter()
            .fold(Self::constant(sign), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let mut acc = Complex::zero(z.prec());
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc.re += c;
        }
        acc
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) · a mod b`.
    pub fn pseudo_rem(&self, b: &IntPolynomial) -> Self {
        let db = b.degree().expect("pseudo-division by zero polynomial");
        let lb = b.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let Some(da) = self.degree() else { return Self::zero() };
        if da < db {
            return self.clone();
        }
        let mut steps = da - db + 1;
        let mut deg = da;
        loop {
            while deg > 0 && r[deg] == 0 {
                deg -= 1;
            }
            if deg < db || (deg == 0 && r[0] == 0) {
                break;
            }
            let lr = r[deg].clone();
            for c in r.iter_mut().take(deg + 1) {
                *c *= &lb;
            }
            let shift = deg - db;
            for (k, bc) in b.coeffs.iter().enumerate() {
                r[k + shift] -= Integer::from(&lr * bc);
            }
            steps -= 1;
            if deg == 0 {
                break;
            }
            deg -= 1;
        }
        let fix = pow_int(&lb, steps as u32);
        Self::new(r).scale(&fix)
    }

    pub fn to_rational(&self) -> RatPolynomial {
        RatPolynomial::new(self.coeffs.iter().map(Rational::from).collect())
    }
}

impl Add<&IntPolynomial> for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub<&IntPolynomial> for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul<&IntPolynomial> for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![Integer::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (k, b) in o.coeffs.iter().enumerate() {
                c[i + k] += a * b;
            }
        }
        IntPolynomial::new(c)
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

fn superscript(k: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    k.to_string().chars().map(|d| DIGITS[d.to_digit(10).unwrap() as usize]).collect()
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Integer::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if mag != 1 || k == 0 {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ{}", superscript(k))?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(Integer::to_string).collect();
        strs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| Integer::from_str_radix(s, 10).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPolynomial::new(coeffs))
    }
}

/// Resultant by the subresultant pseudo-remainder sequence (Collins; the
/// formulation of Cohen's algorithm 3.3.7). All divisions are exact.
pub fn resultant(a: &IntPolynomial, b: &IntPolynomial) -> Integer {
    if a.is_zero() || b.is_zero() {
        return Integer::new();
    }
    let (mut a, mut b) = (a.clone(), b.clone());
    let mut s = 1i32;
    if a.degree() < b.degree() {
        std::mem::swap(&mut a, &mut b);
        if a.degree().unwrap() % 2 == 1 && b.degree().unwrap() % 2 == 1 {
            s = -1;
        }
    }
    let (ca, cb) = (a.content(), b.content());
    let t = pow_int(&ca, b.degree().unwrap() as u32)
        * pow_int(&cb, a.degree().unwrap() as u32);
    a = a.div_exact(&ca);
    b = b.div_exact(&cb);
    let mut g = Integer::from(1);
    let mut h = Integer::from(1);
    loop {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        if db == 0 {
            break;
        }
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        if r.is_zero() {
            return Integer::new();
        }
        let divisor = Integer::from(&g * &pow_int(&h, delta));
        b = r.div_exact(&divisor);
        g = a.leading().unwrap().clone();
        // h <- h^(1-δ) g^δ
        h = if delta == 0 {
            h
        } else {
            let num = pow_int(&g, delta);
            let den = pow_int(&h, delta - 1);
            num.div_exact(&den)
        };
    }
    // b is a nonzero constant here.
    let da = a.degree().unwrap() as u32;
    let lb = b.leading().unwrap();
    let h = if da == 0 {
        Integer::from(1)
    } else {
        let num = pow_int(lb, da);
        let den = pow_int(&h, da - 1);
        num.div_exact(&den)
    };
    Integer::from(s) * t * h
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<Integer>>) -> Integer {
    let n = m.len();
    if n == 0 {
        return Integer::from(1);
    }
    let mut sign = 1;
    let mut prev = Integer::from(1);
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return Integer::new();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for jj in k + 1..n {
                let v = Integer::from(&m[i][jj] * &m[k][k]) - Integer::from(&m[i][k] * &m[k][jj]);
                m[i][jj] = v.div_exact(&prev);
            }
            m[i][k] = Integer::new();
        }
        prev = m[k][k].clone();
    }
    Integer::from(sign) * m[n - 1][n - 1].clone()
}

/// Sylvester matrix of `a` and `b`; its determinant is `Res(a, b)`.
pub fn sylvester_matrix(a: &IntPolynomial, b: &IntPolynomial) -> Vec<Vec<Integer>> {
    let (m, n) = (a.degree().unwrap_or(0), b.degree().unwrap_or(0));
    let size = m + n;
    let mut rows = vec![vec![Integer::new(); size]; size];
    for r in 0..n {
        for (k, c) in a.coeffs().iter().rev().enumerate() {
            rows[r][r + k] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in b.coeffs().iter().rev().enumerate() {
            rows[n + r][r + k] = c.clone();
        }
    }
    rows
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatPolynomial {
    coeffs: Vec<Rational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn one() -> Self {
        Self::new(vec![Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| Rational::from(c * k)).collect())
    }

    /// `λ · self`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(Rational::new());
        c.extend(self.coeffs.iter().cloned());
        Self::new(c)
    }

    pub fn sub(&self, o: &RatPolynomial) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &RatPolynomial) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut c = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (k, b) in o.coeffs.iter().enumerate() {
                c[i + k] += Rational::from(a * b);
            }
        }
        Self::new(c)
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            Some(l) => {
                let inv = Rational::from(l.recip_ref());
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Euclidean division over Q.
    pub fn div_rem(&self, d: &RatPolynomial) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let ld = d.coeffs.last().unwrap().clone();
        let mut r = self.coeffs.clone();
        let Some(ds) = self.degree() else { return (Self::default(), Self::default()) };
        if ds < dd {
            return (Self::default(), self.clone());
        }
        let mut q = vec![Rational::new(); ds - dd + 1];
        for k in (dd..=ds).rev() {
            if r[k] == 0 {
                continue;
            }
            let f = Rational::from(&r[k] / &ld);
            for (i, c) in d.coeffs.iter().enumerate() {
                r[k - dd + i] -= Rational::from(&f * c);
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    /// Monic gcd over Q.
    pub fn gcd(&self, o: &RatPolynomial) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Integer polynomial if every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| (*c.denom() == 1).then(|| c.numer().clone()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    /// Primitive integer polynomial with the same roots.
    pub fn to_primitive_integer(&self) -> IntPolynomial {
        let lcm = self.coeffs.iter().fold(Integer::from(1), |l, c| l.lcm(c.denom()));
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| Integer::from(c.numer() * &lcm) / c.denom())
            .collect();
        IntPolynomial::new(ints).primitive_part()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(desc: &[i64]) -> IntPolynomial {
        IntPolynomial::from_descending(desc)
    }

    #[test]
    fn arithmetic_and_display() {
        let a = p(&[1, 0, -3]);
        let b = p(&[1, 0, -12]);
        let prod = &(&a * &b) * &p(&[-1, 0]);
        assert_eq!(prod, p(&[-1, 0, 15, 0, -36, 0]));
        assert_eq!(prod.to_string(), "-λ⁵ + 15λ³ - 36λ");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
        assert_eq!(p(&[2, -1]).to_string(), "2λ - 1");
        assert!(prod.is_odd() && !prod.is_even());
        assert_eq!(prod.lambda_valuation(), 1);
        assert_eq!(prod.strip_lambda(1).to_mu().unwrap(), p(&[-1, 15, -36]));
    }

    #[test]
    fn pseudo_remainder_matches_definition() {
        let a = p(&[3, 0, 1, 5, -2]);
        let b = p(&[2, 1, 4]);
        let r = a.pseudo_rem(&b);
        assert!(r.degree().unwrap() < 2);
        // lc(b)^(deg a - deg b + 1) a - r must be a multiple of b.
        let lhs = &a.scale(&Integer::from(8)) - &r;
        let (_, rem) = lhs.to_rational().div_rem(&b.to_rational());
        assert!(rem.is_zero());
    }

    #[test]
    fn resultant_agrees_with_sylvester() {
        let cases = [
            (p(&[1, 0, -2]), p(&[1, -3])),
            (p(&[2, 3, -1, 7]), p(&[5, 0, 1])),
            (p(&[1, 0, -1, 0]), p(&[3, 0, -1])),
            (p(&[-1, 0, 15, 0, -36, 0]), p(&[-5, 0, 45, 0, -36])),
            (p(&[1, 1]), p(&[1, 1])),
            (p(&[4, 0, 0, 1]), p(&[7])),
        ];
        for (a, b) in cases {
            let syl = bareiss_determinant(sylvester_matrix(&a, &b));
            assert_eq!(resultant(&a, &b), syl, "{a} , {b}");
        }
    }

    #[test]
    fn rational_gcd_and_division() {
        let a = p(&[1, 0, -3]).to_rational().mul(&p(&[1, -5]).to_rational());
        let b = p(&[1, 0, -3]).to_rational().mul(&p(&[2, 1]).to_rational());
        assert_eq!(a.gcd(&b).to_primitive_integer(), p(&[1, 0, -3]));
        let (q, r) = a.div_rem(&p(&[1, 0, -3]).to_rational());
        assert!(r.is_zero());
        assert_eq!(q.to_integer().unwrap(), p(&[1, -5]));
    }
}
