//! Eigenvalues of `H_TA/χ` with exact multiplicities.
//!
//! Each `Δm = 2` chain is an irreducible Jacobi matrix, so its eigenvalues are
//! simple. With `A`, `B` the two block polynomials and `g = gcd(A, B)`, the
//! roots of `A/g` and `B/g` have multiplicity one and the roots of `g`
//! multiplicity two. Every block polynomial is `λ^v r(λ²)`, so roots are
//! found for `r` in `μ = λ²` and mapped back to `±√μ`.
//!
//! Factors of degree at most four in `μ` are solved in closed form, anything
//! else by Aberth–Ehrlich simultaneous iteration. Both finish with Newton
//! steps on the exact integer polynomial.

use std::cmp::Ordering;
use std::fmt;

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::charpoly::{block_decompose, classify_solvability, Solvability};
use crate::error::{Error, Result};
use crate::halfint::Spin;
use crate::mp::{pi, Complex, Precision};
use crate::poly::{IntPolynomial, RatPolynomial};

/// Decimal digits carried beyond the requested precision while solving.
const GUARD_DIGITS: u32 = 10;
const MAX_ABERTH_ITERATIONS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Exactness {
    ExactRational,
    Radical,
    Numeric,
}

/// Real radical expression over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadicalExpr {
    Rational(#[serde(with = "rational_string")] Rational),
    Add(Box<RadicalExpr>, Box<RadicalExpr>),
    Sub(Box<RadicalExpr>, Box<RadicalExpr>),
    Mul(Box<RadicalExpr>, Box<RadicalExpr>),
    Div(Box<RadicalExpr>, Box<RadicalExpr>),
    Sqrt(Box<RadicalExpr>),
    Neg(Box<RadicalExpr>),
}

impl RadicalExpr {
    pub fn rational(r: impl Into<Rational>) -> Self {
        RadicalExpr::Rational(r.into())
    }

    pub fn sqrt(self) -> Self {
        RadicalExpr::Sqrt(Box::new(self))
    }

    pub fn neg(self) -> Self {
        match self {
            RadicalExpr::Neg(e) => *e,
            RadicalExpr::Rational(r) => RadicalExpr::Rational(-r),
            e => RadicalExpr::Neg(Box::new(e)),
        }
    }

    pub fn add(self, o: RadicalExpr) -> Self {
        RadicalExpr::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: RadicalExpr) -> Self {
        RadicalExpr::Sub(Box::new(self), Box::new(o))
    }

    fn eval_raw(&self, bits: u32) -> Float {
        match self {
            RadicalExpr::Rational(r) => Float::with_val(bits, r),
            RadicalExpr::Add(a, b) => a.eval_raw(bits) + b.eval_raw(bits),
            RadicalExpr::Sub(a, b) => a.eval_raw(bits) - b.eval_raw(bits),
            RadicalExpr::Mul(a, b) => a.eval_raw(bits) * b.eval_raw(bits),
            RadicalExpr::Div(a, b) => a.eval_raw(bits) / b.eval_raw(bits),
            RadicalExpr::Sqrt(a) => a.eval_raw(bits).sqrt(),
            RadicalExpr::Neg(a) => -a.eval_raw(bits),
        }
    }

    /// Value rounded to `bits`, evaluated with 64 extra bits.
    pub fn evaluate(&self, bits: u32) -> Float {
        Float::with_val(bits, self.eval_raw(bits + 64))
    }

    fn is_atom(&self) -> bool {
        matches!(self, RadicalExpr::Rational(r) if *r.denom() == 1 && *r.numer() >= 0)
            || matches!(self, RadicalExpr::Sqrt(_))
    }
}

impl fmt::Display for RadicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &RadicalExpr, f: &mut fmt::Formatter<'_>| {
            if e.is_atom() {
                write!(f, "{e}")
            } else {
                write!(f, "({e})")
            }
        };
        match self {
            RadicalExpr::Rational(r) => write!(f, "{r}"),
            RadicalExpr::Add(a, b) => write!(f, "{a} + {b}"),
            RadicalExpr::Sub(a, b) => {
                write!(f, "{a} - ")?;
                wrap(b, f)
            }
            RadicalExpr::Mul(a, b) => {
                wrap(a, f)?;
                write!(f, "·")?;
                wrap(b, f)
            }
            RadicalExpr::Div(a, b) => {
                wrap(a, f)?;
                write!(f, "/")?;
                wrap(b, f)
            }
            RadicalExpr::Sqrt(a) => {
                write!(f, "√")?;
                wrap(a, f)
            }
            RadicalExpr::Neg(a) => {
                write!(f, "-")?;
                wrap(a, f)
            }
        }
    }
}

mod rational_string {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        Rational::parse(&s).map(Rational::from).map_err(serde::de::Error::custom)
    }
}

/// One eigenvalue of `H_TA/χ` (units of χ).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "EigenvalueRepr", try_from = "EigenvalueRepr")]
pub struct Eigenvalue {
    pub value: Float,
    pub multiplicity: usize,
    pub exactness: Exactness,
    pub radical_form: Option<RadicalExpr>,
}

#[derive(Serialize, Deserialize)]
struct EigenvalueRepr {
    value: String,
    bits: u32,
    multiplicity: usize,
    exactness: Exactness,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radical_form: Option<RadicalExpr>,
}

impl From<Eigenvalue> for EigenvalueRepr {
    fn from(e: Eigenvalue) -> Self {
        EigenvalueRepr {
            value: e.value.to_string_radix(10, None),
            bits: e.value.prec(),
            multiplicity: e.multiplicity,
            exactness: e.exactness,
            radical_form: e.radical_form,
        }
    }
}

impl TryFrom<EigenvalueRepr> for Eigenvalue {
    type Error = String;
    fn try_from(r: EigenvalueRepr) -> std::result::Result<Self, String> {
        let parsed = Float::parse(&r.value).map_err(|e| e.to_string())?;
        Ok(Eigenvalue {
            value: Float::with_val(r.bits, parsed),
            multiplicity: r.multiplicity,
            exactness: r.exactness,
            radical_form: r.radical_form,
        })
    }
}

impl Eigenvalue {
    fn zero(multiplicity: usize, bits: u32) -> Self {
        Eigenvalue {
            value: Float::new(bits),
            multiplicity,
            exactness: Exactness::ExactRational,
            radical_form: Some(RadicalExpr::rational(0)),
        }
    }

    fn negated(&self) -> Self {
        Eigenvalue {
            value: -self.value.clone(),
            multiplicity: self.multiplicity,
            exactness: self.exactness,
            radical_form: self.radical_form.clone().map(RadicalExpr::neg),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub j: Spin,
    pub precision: Precision,
    /// Ascending.
    pub eigenvalues: Vec<Eigenvalue>,
    pub degenerate: bool,
    pub solvability: Solvability,
    pub pairing_verified: bool,
}

impl SpectrumReport {
    /// Every eigenvalue repeated by its multiplicity, ascending.
    pub fn expanded(&self) -> Vec<Float> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value.clone(), e.multiplicity))
            .collect()
    }

    pub fn distinct(&self) -> Vec<Float> {
        self.eigenvalues.iter().map(|e| e.value.clone()).collect()
    }
}

/// Which root finder `spectrum_with` uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootPath {
    /// Closed forms when every μ-factor has degree at most 4.
    Auto,
    Radical,
    Numeric,
}

/// A root in `μ` before mapping to `±√μ`.
struct MuRoot {
    value: Float,
    exact: Option<Rational>,
    form: Option<RadicalExpr>,
    exactness: Exactness,
}

fn working_bits(p: Precision, r: &IntPolynomial) -> u32 {
    let lead = r.leading().map(|l| l.significant_bits()).unwrap_or(1);
    let widest = r.coeffs().iter().map(|c| c.significant_bits()).max().unwrap_or(1);
    // room for the root magnitude bound
    let extra = (widest.saturating_sub(lead) as f64 / std::f64::consts::LOG2_10).ceil() as u32;
    p.guarded(GUARD_DIGITS + extra).bits()
}

/// Square-free decomposition over Q: `r = c · Π f_i^i`.
fn squarefree(r: &IntPolynomial) -> Vec<(IntPolynomial, usize)> {
    let mut out = Vec::new();
    if r.degree().unwrap_or(0) == 0 {
        return out;
    }
    let a = r.to_rational();
    let mut c = a.gcd(&r.derivative().to_rational());
    let mut w = a.div_rem(&c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c);
        let z = w.div_rem(&y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.to_primitive_integer(), i));
        }
        c = c.div_rem(&y).0;
        w = y;
        i += 1;
    }
    out
}

/// `(r(x), r'(x), Σ|c_k||x|^k)`.
fn eval_real(r: &IntPolynomial, x: &Float) -> (Float, Float, Float) {
    let bits = x.prec();
    let ax = Float::with_val(bits, x.abs_ref());
    let mut v = Float::new(bits);
    let mut dv = Float::new(bits);
    let mut bound = Float::new(bits);
    for c in r.coeffs().iter().rev() {
        dv *= x;
        dv += &v;
        v *= x;
        v += c;
        bound *= &ax;
        bound += Float::with_val(bits, &Integer::from(c.abs_ref()));
    }
    (v, dv, bound)
}

fn eval_complex(r: &IntPolynomial, z: &Complex) -> (Complex, Complex) {
    let mut v = Complex::zero(z.prec());
    let mut dv = Complex::zero(z.prec());
    for c in r.coeffs().iter().rev() {
        dv *= z;
        dv += &v;
        v *= z;
        v.re += c;
    }
    (v, dv)
}

/// Newton steps on the exact polynomial until the root is known to `p`
/// digits, raising the working precision when the evaluation is too noisy.
/// Certifies `|r(x)/r'(x)| < 10^(-p+5)`.
fn polish(r: &IntPolynomial, x0: &Float, p: Precision) -> Result<Float> {
    let target = Float::with_val(64, 10).pow_ref_i32(-(p.digits() as i32) - 2);
    let mut bits = x0.prec();
    let mut x = x0.clone();
    let mut best = f64::INFINITY;
    for _round in 0..6 {
        x.set_prec(bits);
        for _ in 0..200 {
            let (v, dv, _) = eval_real(r, &x);
            if dv.is_zero() {
                break;
            }
            let step = Float::with_val(bits, &v / &dv);
            x -= &step;
            let scale = Float::with_val(bits, x.abs_ref()).max(&Float::with_val(bits, 1));
            let tiny = scale >> (bits as i32 - 8);
            if Float::with_val(bits, step.abs_ref()) <= tiny {
                break;
            }
        }
        let (v, dv, bound) = eval_real(r, &x);
        if dv.is_zero() {
            return Err(Error::NumericFailure { iterations: 200, best_residual: f64::INFINITY });
        }
        let residual = Float::with_val(bits, &v / &dv).abs();
        best = best.min(residual.to_f64());
        // error in x from rounding in the evaluation
        let noise = Float::with_val(bits, &bound / &dv).abs() >> (bits as i32 - 2);
        let scale = Float::with_val(bits, x.abs_ref()).max(&Float::with_val(bits, 1));
        let allowed = Float::with_val(bits, &scale * &target);
        if noise <= allowed && residual < p.tolerance_float() {
            return Ok(x);
        }
        let deficit = (noise.to_f64() / allowed.to_f64()).log2().ceil().max(16.0) as u32;
        bits += deficit + 16;
    }
    Err(Error::NumericFailure { iterations: 6 * 200, best_residual: best })
}

trait PowI32 {
    fn pow_ref_i32(&self, e: i32) -> Float;
}

impl PowI32 for Float {
    fn pow_ref_i32(&self, e: i32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(e))
    }
}

/// Aberth–Ehrlich iteration for all roots of `r`.
fn aberth(r: &IntPolynomial, bits: u32) -> Result<Vec<Complex>> {
    let n = r.degree().unwrap_or(0);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = Float::with_val(bits, r.leading().unwrap());
    let center = Float::with_val(bits, &r.coeffs()[n - 1]) / (Float::with_val(bits, n) * &lead);
    let center = -center;
    let (vc, _, _) = eval_real(r, &center);
    let mut radius = Float::with_val(bits, (vc / &lead).abs()).root(n as u32);
    if radius.is_zero() || !radius.is_finite() {
        let max_ratio = r
            .coeffs()
            .iter()
            .map(|c| Float::with_val(bits, &Integer::from(c.abs_ref())) / &lead)
            .fold(Float::new(bits), |a, b| a.max(&b.abs()));
        radius = max_ratio + 1u32;
    }
    let two_pi = pi(bits) * 2u32;
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = Float::with_val(bits, &two_pi * k as u32) / n as u32 + 0.4f64;
            let mut p = Complex::expi(&theta).scale(&radius);
            p.re += &center;
            p
        })
        .collect();

    let converged_at = bits * 3 / 4;
    let mut worst = f64::INFINITY;
    for it in 0..MAX_ABERTH_ITERATIONS {
        let mut done = true;
        worst = 0.0;
        for k in 0..n {
            let (v, dv) = eval_complex(r, &z[k]);
            if v.is_zero() {
                continue;
            }
            let ratio = &v / &dv;
            let mut s = Complex::zero(bits);
            for (i, zi) in z.iter().enumerate() {
                if i != k {
                    s += &(&z[k] - zi).recip();
                }
            }
            let denom = &Complex::one(bits) - &(&ratio * &s);
            let w = &ratio / &denom;
            z[k] -= &w;
            let scale = z[k].abs().max(&Float::with_val(bits, 1));
            let rel = w.abs() / &scale;
            worst = worst.max(rel.to_f64());
            if rel > (Float::with_val(bits, 1) >> converged_at as i32) {
                done = false;
            }
        }
        if done {
            let _ = it;
            return Ok(z);
        }
    }
    Err(Error::NumericFailure { iterations: MAX_ABERTH_ITERATIONS, best_residual: worst })
}

/// Closed-form real roots of a square-free `r(μ)` of degree at most 4.
fn closed_form_mu(r: &IntPolynomial, bits: u32) -> Result<Vec<MuRoot>> {
    let c: Vec<Rational> = r.coeffs().iter().map(Rational::from).collect();
    let n = r.degree().unwrap_or(0);
    match n {
        1 => {
            let mu = (-c[0].clone()) / &c[1];
            Ok(vec![exact_mu(mu, bits)])
        }
        2 => {
            // μ = -b/2a ± √(D/4a²)
            let (a, b, cc) = (&c[2], &c[1], &c[0]);
            let disc = Rational::from(b * b) - Rational::from(a * cc) * 4u32;
            if disc < 0 {
                return Err(Error::SpectralConsistency(format!("non-real roots of {r} (in μ)")));
            }
            let two_a = Rational::from(a * 2u32);
            let mid = (-b.clone()) / &two_a;
            let rad = &disc / Rational::from(&two_a * &two_a);
            if let Some(s) = rational_sqrt(&rad) {
                return Ok(vec![
                    exact_mu(Rational::from(&mid - &s), bits),
                    exact_mu(Rational::from(&mid + &s), bits),
                ]);
            }
            let root = RadicalExpr::rational(rad).sqrt();
            let lo = RadicalExpr::rational(mid.clone()).sub(root.clone());
            let hi = RadicalExpr::rational(mid).add(root);
            Ok([lo, hi]
                .into_iter()
                .map(|e| MuRoot { value: e.evaluate(bits), exact: None, form: Some(e), exactness: Exactness::Radical })
                .collect())
        }
        3 => Ok(real_cubic(&c, bits, &r.to_string())?
            .into_iter()
            .map(|v| MuRoot { value: v, exact: None, form: None, exactness: Exactness::Radical })
            .collect()),
        4 => Ok(real_quartic(&c, bits, &r.to_string())?
            .into_iter()
            .map(|v| MuRoot { value: v, exact: None, form: None, exactness: Exactness::Radical })
            .collect()),
        _ => Err(Error::InvalidInput(format!(
            "closed-form roots need degree 1..=4 in μ, got {n}"
        ))),
    }
}

fn exact_mu(mu: Rational, bits: u32) -> MuRoot {
    MuRoot {
        value: Float::with_val(bits, &mu),
        form: Some(RadicalExpr::rational(mu.clone())),
        exact: Some(mu),
        exactness: Exactness::ExactRational,
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if *q < 0 || !q.numer().is_perfect_square() || !q.denom().is_perfect_square() {
        return None;
    }
    Some(Rational::from((Integer::from(q.numer().sqrt_ref()), Integer::from(q.denom().sqrt_ref()))))
}

/// The three real roots of `c3 μ³ + c2 μ² + c1 μ + c0` by the trigonometric
/// form of Cardano's formula.
fn real_cubic(c: &[Rational], bits: u32, label: &str) -> Result<Vec<Float>> {
    let b = Rational::from(&c[2] / &c[3]);
    let cc = Rational::from(&c[1] / &c[3]);
    let d = Rational::from(&c[0] / &c[3]);
    // μ = t - b/3, t³ + p t + q = 0
    let p = &cc - Rational::from(&b * &b) / 3u32;
    let q = Rational::from(&b * &b) * &b * 2u32 / 27u32 - Rational::from(&b * &cc) / 3u32 + &d;
    let shift = Float::with_val(bits, &b) / 3u32;
    if p == 0 {
        // only a triple root is real here
        if q != 0 {
            return Err(Error::SpectralConsistency(format!("non-real roots of {label} (in μ)")));
        }
        return Ok(vec![-shift; 3]);
    }
    if p > 0 {
        return Err(Error::SpectralConsistency(format!("non-real roots of {label} (in μ)")));
    }
    let pf = Float::with_val(bits, &p);
    let qf = Float::with_val(bits, &q);
    let m = (-pf.clone() / 3u32).sqrt() * 2u32;
    let mut arg = Float::with_val(bits, &qf * 3u32) / (Float::with_val(bits, &pf * 2u32))
        * Float::with_val(bits, Float::with_val(bits, -3) / &pf).sqrt();
    let slack = Float::with_val(bits, 1) >> (bits as i32 / 2);
    if Float::with_val(bits, arg.abs_ref()) > Float::with_val(bits, 1) + &slack {
        return Err(Error::SpectralConsistency(format!("non-real roots of {label} (in μ)")));
    }
    arg = arg.clamp(&-1, &1);
    let theta = arg.acos() / 3u32;
    let third = pi(bits) * 2u32 / 3u32;
    Ok((0..3)
        .map(|k| {
            let ang = Float::with_val(bits, &theta - Float::with_val(bits, &third * k as u32));
            Float::with_val(bits, &m * ang.cos()) - &shift
        })
        .collect())
}

/// The four real roots of a quartic by Ferrari's method.
fn real_quartic(c: &[Rational], bits: u32, label: &str) -> Result<Vec<Float>> {
    let inv = Rational::from(c[4].recip_ref());
    let b = Rational::from(&c[3] * &inv);
    let cc = Rational::from(&c[2] * &inv);
    let d = Rational::from(&c[1] * &inv);
    let e = Rational::from(&c[0] * &inv);
    // μ = y - b/4, y⁴ + p y² + q y + r = 0
    let b2 = Rational::from(&b * &b);
    let p = &cc - Rational::from(&b2 * 3u32) / 8u32;
    let q = Rational::from(&b2 * &b) / 8u32 - Rational::from(&b * &cc) / 2u32 + &d;
    let r = Rational::from(&b2 * &b2) * (-3) / 256u32 + Rational::from(&b2 * &cc) / 16u32
        - Rational::from(&b * &d) / 4u32
        + &e;
    let shift = Float::with_val(bits, &b) / 4u32;
    let non_real = || Error::SpectralConsistency(format!("non-real roots of {label} (in μ)"));
    let slack = Float::with_val(bits, 1) >> (bits as i32 / 2);
    let real_sqrt = |x: Float, scale: &Float| -> Result<Float> {
        if x < 0 {
            if Float::with_val(bits, -&x) > Float::with_val(bits, scale * &slack) {
                return Err(non_real());
            }
            return Ok(Float::new(bits));
        }
        Ok(x.sqrt())
    };

    let pf = Float::with_val(bits, &p);
    let scale = Float::with_val(bits, pf.abs_ref()) + 1u32;
    let ys: Vec<Float> = if q == 0 {
        // biquadratic in y
        let disc = Float::with_val(bits, &(Rational::from(&p * &p) - Rational::from(&r * 4u32)));
        let s = real_sqrt(disc, &Float::with_val(bits, &scale * &scale))?;
        let mut out = Vec::new();
        for y2 in [(-pf.clone() - &s) / 2u32, (-pf.clone() + &s) / 2u32] {
            let y = real_sqrt(y2, &scale)?;
            out.push(-y.clone());
            out.push(y);
        }
        out
    } else {
        // resolvent 8m³ + 8p m² + (2p² - 8r) m - q² = 0, take its largest root
        let res = [
            (-Rational::from(&q * &q)),
            Rational::from(&p * &p) * 2u32 - Rational::from(&r * 8u32),
            Rational::from(&p * 8u32),
            Rational::from(8),
        ];
        let m = real_cubic(&res, bits, label)?
            .into_iter()
            .fold(Float::with_val(bits, f64::NEG_INFINITY), |a, x| a.max(&x));
        if m <= 0 {
            return Err(non_real());
        }
        let s2m = Float::with_val(bits, &m * 2u32).sqrt();
        let qf = Float::with_val(bits, &q);
        let mut out = Vec::new();
        for s1 in [-1i32, 1] {
            let inner = -(Float::with_val(bits, &pf * 2u32)
                + Float::with_val(bits, &m * 2u32)
                + Float::with_val(bits, &qf * 2u32) * s1 / &s2m);
            let t = real_sqrt(inner, &scale)?;
            for s2 in [-1i32, 1] {
                out.push((Float::with_val(bits, &s2m * s1) + Float::with_val(bits, &t * s2)) / 2u32);
            }
        }
        out
    };
    Ok(ys.into_iter().map(|y| y - &shift).collect())
}

/// Real roots of a square-free `r(μ)` by Aberth–Ehrlich iteration.
fn numeric_mu(r: &IntPolynomial, bits: u32, label: &str) -> Result<Vec<MuRoot>> {
    let z = aberth(r, bits)?;
    let loose = Float::with_val(bits, 1) >> (bits as i32 / 3);
    z.into_iter()
        .map(|z| {
            let scale = z.abs().max(&Float::with_val(bits, 1));
            if Float::with_val(bits, z.im.abs_ref()) > Float::with_val(bits, &scale * &loose) {
                return Err(Error::SpectralConsistency(format!(
                    "non-real root {:?} of {label} (in μ)",
                    z.to_f64()
                )));
            }
            Ok(MuRoot { value: z.re, exact: None, form: None, exactness: Exactness::Numeric })
        })
        .collect()
}

/// `±√μ` for every root of the square-free factor `r(μ)`.
fn lambda_pairs(
    r: &IntPolynomial,
    multiplicity: usize,
    p: Precision,
    radical: bool,
) -> Result<Vec<Eigenvalue>> {
    let bits = working_bits(p, r);
    let label = r.to_string();
    let mut roots = if radical { closed_form_mu(r, bits)? } else { numeric_mu(r, bits, &label)? };
    for root in roots.iter_mut() {
        if root.exact.is_none() {
            root.value = polish(r, &root.value, p)?;
        }
    }
    roots.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(Ordering::Equal));
    // a collapsed pair means a non-real root was pulled onto the real axis
    let sep = Float::with_val(64, 10).pow_ref_i32(-(p.digits() as i32) / 2);
    for w in roots.windows(2) {
        let gap = Float::with_val(w[1].value.prec(), &w[1].value - &w[0].value);
        let scale = Float::with_val(64, w[1].value.abs_ref()).max(&Float::with_val(64, 1));
        if gap <= Float::with_val(64, &scale * &sep) {
            return Err(Error::SpectralConsistency(format!(
                "roots of the square-free factor {label} (in μ) did not separate"
            )));
        }
    }

    let out_bits = p.bits();
    let tol = p.tolerance_float();
    let mut out = Vec::new();
    for root in roots {
        if root.value < 0 {
            let scale = Float::with_val(64, root.value.abs_ref()).max(&Float::with_val(64, 1));
            if Float::with_val(out_bits, -&root.value) > Float::with_val(out_bits, &tol * &scale) {
                return Err(Error::SpectralConsistency(format!(
                    "negative root μ = {:.6e} of {label}; H is not Hermitian",
                    root.value.to_f64()
                )));
            }
        }
        let (exactness, form) = match (&root.exact, root.form) {
            (Some(mu), _) => match rational_sqrt(mu) {
                Some(s) => (Exactness::ExactRational, Some(RadicalExpr::rational(s))),
                None => (Exactness::Radical, Some(RadicalExpr::rational(mu.clone()).sqrt())),
            },
            (None, Some(f)) => (Exactness::Radical, Some(f.sqrt())),
            (None, None) => (root.exactness, None),
        };
        let value = match &form {
            Some(f) => f.evaluate(out_bits),
            None => Float::with_val(out_bits, Float::with_val(root.value.prec(), root.value.abs_ref()).sqrt()),
        };
        let pos = Eigenvalue { value, multiplicity, exactness, radical_form: form };
        out.push(pos.negated());
        out.push(pos);
    }
    Ok(out)
}

fn roots_impl(q: &IntPolynomial, p: Precision, radical: bool) -> Result<Vec<Eigenvalue>> {
    if q.is_zero() {
        return Err(Error::InvalidInput("the zero polynomial has no finite root set".into()));
    }
    let v = q.lambda_valuation();
    let rest = q.strip_lambda(v);
    let mu = rest.to_mu()?;
    let mut out = Vec::new();
    if v > 0 {
        out.push(Eigenvalue::zero(v, p.bits()));
    }
    for (factor, mult) in squarefree(&mu) {
        out.extend(lambda_pairs(&factor, mult, p, radical)?);
    }
    sort_eigenvalues(&mut out);
    Ok(out)
}

/// Roots of an even polynomial by closed forms in `μ = λ²`. Each square-free
/// factor in `μ` must have degree at most 4.
pub fn roots_even_poly(q: &IntPolynomial, p: Precision) -> Result<Vec<Eigenvalue>> {
    if !q.is_even() {
        return Err(Error::InvalidInput(format!("{q} is not even in λ")));
    }
    roots_impl(q, p, true)
}

/// Roots of `λ^v r(λ²)` by simultaneous iteration in `μ`.
pub fn roots_numeric(q: &IntPolynomial, p: Precision) -> Result<Vec<Eigenvalue>> {
    roots_impl(q, p, false)
}

fn sort_eigenvalues(v: &mut [Eigenvalue]) {
    v.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(Ordering::Equal));
}

/// `λ → -λ` symmetry of the sorted list, with matching multiplicities.
pub fn check_pairing(eigenvalues: &[Eigenvalue], p: Precision) -> bool {
    let n = eigenvalues.len();
    let tol = p.tolerance_float();
    (0..n).all(|i| {
        let (a, b) = (&eigenvalues[i], &eigenvalues[n - 1 - i]);
        let sum = Float::with_val(a.value.prec(), &a.value + &b.value).abs();
        let scale = Float::with_val(64, a.value.abs_ref()).max(&Float::with_val(64, 1));
        a.multiplicity == b.multiplicity && sum <= Float::with_val(64, &tol * &scale)
    })
}

pub fn spectrum(j: Spin, p: Precision) -> Result<SpectrumReport> {
    spectrum_with(j, p, RootPath::Auto)
}

pub fn spectrum_with(j: Spin, p: Precision, path: RootPath) -> Result<SpectrumReport> {
    let solvability = classify_solvability(j)?;
    let radical = match path {
        RootPath::Auto => solvability.mu_degree <= 4,
        RootPath::Radical => true,
        RootPath::Numeric => false,
    };
    let d = block_decompose(j);
    let a = d.block_a.char_poly();
    let b = d.block_b.char_poly();
    let g = a.gcd(&b);
    let parts: [(RatPolynomial, usize); 3] = [(a.div_rem(&g).0, 1), (b.div_rem(&g).0, 1), (g, 2)];

    let mut eigenvalues = Vec::new();
    for (part, mult) in parts {
        if part.degree().unwrap_or(0) == 0 {
            continue;
        }
        let ints = part.to_primitive_integer();
        for mut e in roots_impl(&ints, p, radical)? {
            e.multiplicity *= mult;
            eigenvalues.push(e);
        }
    }
    sort_eigenvalues(&mut eigenvalues);

    let total: usize = eigenvalues.iter().map(|e| e.multiplicity).sum();
    if total != j.dim() {
        return Err(Error::InternalConsistency(format!(
            "multiplicities sum to {total}, expected {}",
            j.dim()
        )));
    }
    let has_zero = eigenvalues.iter().any(|e| e.value.is_zero());
    let pairing_verified = check_pairing(&eigenvalues, p) && (!j.is_integer() || has_zero);
    let degenerate = eigenvalues.iter().any(|e| e.multiplicity > 1);
    Ok(SpectrumReport { j, precision: p, eigenvalues, degenerate, solvability, pairing_verified })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::char_poly_exact;

    fn spin(s: &str) -> Spin {
        s.parse().unwrap()
    }

    fn p34() -> Precision {
        Precision::default()
    }

    fn poly(desc: &[i64]) -> IntPolynomial {
        IntPolynomial::from_descending(desc)
    }

    fn values(v: &[Eigenvalue]) -> Vec<f64> {
        v.iter().map(|e| e.value.to_f64()).collect()
    }

    #[test]
    fn j2_even_part() {
        let r = roots_even_poly(&poly(&[1, 0, -21, 0, 108]), p34()).unwrap();
        let s3 = 3f64.sqrt();
        let expect = [-2.0 * s3, -3.0, 3.0, 2.0 * s3];
        for (e, x) in r.iter().zip(expect) {
            assert!((e.value.to_f64() - x).abs() < 1e-15);
        }
        assert_eq!(r[1].exactness, Exactness::ExactRational);
        assert_eq!(r[0].exactness, Exactness::Radical);
        assert_eq!(r[3].radical_form.as_ref().unwrap().to_string(), "√12");
    }

    #[test]
    fn quadratic_in_mu_form() {
        let r = roots_even_poly(&poly(&[1, 0, -126, 0, 945]), p34()).unwrap();
        assert_eq!(r.len(), 4);
        let top = r[3].radical_form.as_ref().unwrap();
        assert_eq!(top.to_string(), "√(63 + √3024)");
        let x = (63.0 + 3024f64.sqrt()).sqrt();
        assert!((r[3].value.to_f64() - x).abs() < 1e-13);
    }

    #[test]
    fn radical_form_reproduces_value() {
        for t in 1..=17 {
            let rep = spectrum(Spin::from_twice(t).unwrap(), p34()).unwrap();
            for e in &rep.eigenvalues {
                if let Some(f) = &e.radical_form {
                    let v = f.evaluate(e.value.prec());
                    let diff = Float::with_val(e.value.prec(), &v - &e.value).abs();
                    let ulp = Float::with_val(64, e.value.abs_ref()).max(&Float::with_val(64, 1))
                        >> (e.value.prec() as i32 - 1);
                    assert!(diff <= ulp, "2j={t}: {} vs {}", v, e.value);
                }
            }
        }
    }

    #[test]
    fn cubic_and_quartic_closed_forms() {
        // (μ-1)(μ-4)(μ-9) and (μ-1)(μ-2)(μ-5)(μ-7)
        let cubic = &(&poly(&[1, -1]) * &poly(&[1, -4])) * &poly(&[1, -9]);
        let quartic = &(&(&poly(&[1, -1]) * &poly(&[1, -2])) * &poly(&[1, -5])) * &poly(&[1, -7]);
        let r = roots_even_poly(&IntPolynomial::from_mu(&cubic), p34()).unwrap();
        assert_eq!(values(&r[3..]), vec![1.0, 2.0, 3.0]);
        let r = roots_even_poly(&IntPolynomial::from_mu(&quartic), p34()).unwrap();
        let pos: Vec<f64> = values(&r[4..]);
        for (a, b) in pos.iter().zip([1.0, 2f64.sqrt(), 5f64.sqrt(), 7f64.sqrt()]) {
            assert!((a - b).abs() < 1e-15);
        }
        // roots symmetric about their mean: the depressed quartic is biquadratic
        let biq = &(&poly(&[1, -1]) * &poly(&[1, -2])) * &(&poly(&[1, -4]) * &poly(&[1, -5]));
        let r = roots_even_poly(&IntPolynomial::from_mu(&biq), p34()).unwrap();
        assert_eq!(r.len(), 8);
        assert!((r[7].value.to_f64() - 5f64.sqrt()).abs() < 1e-15);
        assert!((r[4].value.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn repeated_and_zero_roots() {
        let r = roots_even_poly(&poly(&[1, 0, -6, 0, 9]), p34()).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|e| e.multiplicity == 2));
        let r = roots_numeric(&poly(&[1, 0]).pow(2), p34()).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].multiplicity, 2);
        let r = roots_numeric(&poly(&[-1, 0, 1, 0]), p34()).unwrap();
        assert_eq!(values(&r), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn non_real_mu_is_rejected() {
        assert!(matches!(
            roots_even_poly(&poly(&[1, 0, 3]), p34()),
            Err(Error::SpectralConsistency(_))
        ));
        assert!(matches!(
            roots_numeric(&poly(&[1, 0, 1, 0, 1]), p34()),
            Err(Error::SpectralConsistency(_))
        ));
        assert!(roots_even_poly(&poly(&[1, 1]), p34()).is_err());
    }

    #[test]
    fn small_spectra() {
        let r = spectrum(spin("2"), p34()).unwrap();
        assert!(!r.degenerate && r.pairing_verified);
        assert_eq!(r.eigenvalues.len(), 5);
        let r = spectrum(spin("3/2"), p34()).unwrap();
        assert!(r.degenerate && r.pairing_verified);
        assert_eq!(r.eigenvalues.len(), 2);
        assert!(r.eigenvalues.iter().all(|e| e.multiplicity == 2));
        let r = spectrum(spin("1/2"), p34()).unwrap();
        assert_eq!(r.eigenvalues.len(), 1);
        assert_eq!(r.eigenvalues[0].multiplicity, 2);
        assert!(spectrum(spin("0"), p34()).is_err());
    }

    #[test]
    fn degenerate_matches_discriminant() {
        for t in 1..=22 {
            let j = Spin::from_twice(t).unwrap();
            let disc = crate::charpoly::discriminant(&char_poly_exact(j).unwrap()).unwrap();
            assert_eq!(spectrum(j, p34()).unwrap().degenerate, disc == 0, "2j={t}");
        }
    }

    #[test]
    fn paths_agree() {
        let p = p34();
        let tol = Float::with_val(64, 10).pow_ref_i32(-(p.digits() as i32 - 8));
        for t in 1..=17 {
            let j = Spin::from_twice(t).unwrap();
            let a = spectrum_with(j, p, RootPath::Radical).unwrap();
            let b = spectrum_with(j, p, RootPath::Numeric).unwrap();
            assert_eq!(a.eigenvalues.len(), b.eigenvalues.len());
            for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
                assert_eq!(x.multiplicity, y.multiplicity);
                let d = Float::with_val(x.value.prec(), &x.value - &y.value).abs();
                assert!(d < tol, "2j={t}: {} vs {}", x.value, y.value);
            }
        }
    }

    #[test]
    fn j30_moments() {
        let j = spin("30");
        let p = p34();
        let r = spectrum(j, p).unwrap();
        assert!(r.pairing_verified);
        assert_eq!(r.eigenvalues.len(), 61);
        let bits = p.bits() + 64;
        let mut s1 = Float::new(bits);
        let mut s2 = Float::new(bits);
        for x in r.expanded() {
            s1 += &x;
            s2 += Float::with_val(bits, &x * &x);
        }
        let exact = Float::with_val(bits, &block_decompose(j).trace_sq());
        let rel = ((s2 - &exact) / &exact).abs();
        assert!(rel < Float::with_val(64, 10).pow_ref_i32(-(p.digits() as i32 - 10)));
        assert!(s1.abs() < 1e-25);
    }

    #[test]
    fn j11_sextic_reconstructs() {
        let p = p34();
        let mu = IntPolynomial::from_descending(&[
            1,
            -26598,
            225185103,
            -712278892116,
            768687668037135,
            -202420859545362150,
            4712996874211250625,
        ]);
        let lam = IntPolynomial::from_mu(&mu);
        let full = char_poly_exact(spin("11")).unwrap();
        assert!(full.to_rational().div_rem(&lam.to_rational()).1.is_zero());

        let roots = roots_numeric(&lam, p).unwrap();
        assert_eq!(roots.len(), 12);
        let bits = p.bits() + 64;
        // Π (μ - μ_k) over the positive roots
        let mut coeffs = vec![Float::with_val(bits, 1)];
        for e in roots.iter().filter(|e| e.value > 0) {
            assert_eq!(e.exactness, Exactness::Numeric);
            let m = Float::with_val(bits, &e.value * &e.value);
            let mut next = vec![Float::new(bits); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= Float::with_val(bits, c * &m);
            }
            coeffs = next;
        }
        assert_eq!(coeffs.len(), 7);
        let tol = Float::with_val(64, 10).pow_ref_i32(-(p.digits() as i32 - 8));
        for (k, c) in coeffs.iter().enumerate() {
            let exact = Float::with_val(bits, &mu.coeffs()[k]);
            let rel = (Float::with_val(bits, c - &exact) / &exact).abs();
            assert!(rel < tol, "coefficient {k}: {rel}");
        }
    }

    #[test]
    fn report_roundtrips_through_json() {
        let r = spectrum(spin("7/2"), p34()).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: SpectrumReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
