//! Angular momentum matrices, the two-axis countertwisting Hamiltonian and
//! rotations about `y`, all in the `m`-descending `|j, m>` basis.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::halfint::{HalfInt, Spin};
use crate::mp::{pi, Complex, Precision};
use crate::operator::DenseOperator;

#[derive(Clone, Debug)]
pub struct Ladder {
    pub plus: DenseOperator,
    pub minus: DenseOperator,
}

#[derive(Clone, Debug)]
pub struct Cartesian {
    pub x: DenseOperator,
    pub y: DenseOperator,
    pub z: DenseOperator,
}

/// `J+` and `J- = (J+)^†`, with `<m+1|J+|m> = sqrt(j(j+1) - m(m+1))`.
pub fn build_ladder(j: Spin, precision: Precision) -> Ladder {
    let bits = precision.bits();
    let mut plus = DenseOperator::zeros(j, bits);
    for c in 1..j.dim() {
        let m = j.label_at(c);
        plus.set(c - 1, c, Complex::real(Float::with_val(bits, j.raising_sq(m)).sqrt()));
    }
    let minus = plus.adjoint();
    Ladder { plus, minus }
}

/// `Jx = (J+ + J-)/2`, `Jy = (J+ - J-)/(2i)`, `Jz = diag(m)`.
pub fn build_cartesian(j: Spin, precision: Precision) -> Cartesian {
    let bits = precision.bits();
    let Ladder { plus, minus } = build_ladder(j, precision);
    let half = Float::with_val(bits, 0.5);
    let neg_half_i = Complex::from_f64(0.0, -0.5, bits);
    let x = plus.add(&minus).expect("same spin").scale_real(&half);
    let y = plus.sub(&minus).expect("same spin").scale_complex(&neg_half_i);
    let z = DenseOperator::from_fn(j, bits, |r, c| {
        if r == c {
            Complex::real(Float::with_val(bits, j.label_at(r).to_rational()))
        } else {
            Complex::zero(bits)
        }
    });
    let herm = |op: DenseOperator| op.mark_hermitian().expect("spin operators are Hermitian");
    Cartesian { x: herm(x), y: herm(y), z: herm(z) }
}

/// Squared modulus of `<m+2|H_TA/χ|m>`:
/// `w_m = (j(j+1) - m(m+1)) (j(j+1) - (m+1)(m+2)) / 4`.
pub fn pair_coupling_sq(j: Spin, m: HalfInt) -> Rational {
    let next = HalfInt::from_twice(m.twice() + 2);
    j.raising_sq(m) * j.raising_sq(next) / Rational::from(4)
}

/// `H_TA = (χ/2i)(J+² - J-²)`, built directly from its `|Δm| = 2` elements
/// `<m+2|H|m> = -iχ sqrt(w_m)` and their conjugates.
pub fn build_h_ta(j: Spin, chi: f64, precision: Precision) -> DenseOperator {
    let bits = precision.bits();
    let chi_f = Float::with_val(bits, chi);
    let mut h = DenseOperator::zeros(j, bits);
    for c in 2..j.dim() {
        let m = j.label_at(c);
        let amp = Float::with_val(bits, pair_coupling_sq(j, m)).sqrt() * &chi_f;
        h.set(c, c - 2, Complex::imag(amp.clone()));
        h.set(c - 2, c, Complex::imag(-amp));
    }
    h.with_scale(chi).mark_hermitian().expect("H_TA is Hermitian by construction")
}

/// `H_f = H_TA + Ω Jz`.
pub fn build_h_f(j: Spin, chi: f64, omega: f64, precision: Precision) -> DenseOperator {
    let bits = precision.bits();
    let mut h = build_h_ta(j, chi, precision);
    let omega_f = Float::with_val(bits, omega);
    for k in 0..j.dim() {
        let m = Float::with_val(bits, j.label_at(k).to_rational());
        h.get_mut(k, k).re += m * &omega_f;
    }
    h.with_scale(chi).mark_hermitian().expect("H_f is Hermitian by construction")
}

/// A rotation angle, either a binary64 value or an exact rational multiple
/// of π (evaluated at working precision).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    Radians(f64),
    PiFraction { num: i64, den: u64 },
}

impl Angle {
    pub fn pi_times(num: i64, den: u64) -> Self {
        Angle::PiFraction { num, den }
    }

    pub fn to_float(self, bits: u32) -> Float {
        match self {
            Angle::Radians(r) => Float::with_val(bits, r),
            Angle::PiFraction { num, den } => pi(bits) * Integer::from(num) / Integer::from(den),
        }
    }
}

impl From<f64> for Angle {
    fn from(r: f64) -> Self {
        Angle::Radians(r)
    }
}

fn factorials(n: usize) -> Vec<Integer> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Integer::from(1));
    for k in 1..=n {
        let next = Integer::from(&out[k - 1] * k as u32);
        out.push(next);
    }
    out
}

/// `e^{-iβJy}` from the Wigner small-d sum
/// `d_{m'm}(β) = Σ_k (-1)^{k-m+m'} sqrt((j+m)!(j-m)!(j+m')!(j-m')!)
///   / ((j+m-k)! k! (j-k-m')! (k-m+m')!) cos^{2j+m-m'-2k}(β/2) sin^{2k-m+m'}(β/2)`.
pub fn wigner_rotation_y(j: Spin, beta: impl Into<Angle>, precision: Precision) -> DenseOperator {
    let bits = precision.bits();
    let work = bits + 32;
    let half_beta = beta.into().to_float(work) / 2u32;
    let (s, c) = half_beta.sin_cos(Float::new(work));
    let fact = factorials(j.dim());
    let jt = j.twice();
    let n = j.dim();
    let mut out = DenseOperator::zeros(j, bits);
    for col in 0..n {
        // Integer offsets j+m, j-m, j+m', j-m'.
        let jpm = (jt + j.label_at(col).twice()) / 2;
        let jmm = jt - jpm;
        for row in 0..n {
            let jpmp = (jt + j.label_at(row).twice()) / 2;
            let jmmp = jt - jpmp;
            // k - m + m' = k + (j+m') - (j+m)
            let shift = jpmp - jpm;
            let k_lo = 0.max(-shift);
            let k_hi = jpm.min(jmmp);
            let root = Float::with_val(
                work,
                Integer::from(&fact[jpm as usize] * &fact[jmm as usize])
                    * &fact[jpmp as usize]
                    * &fact[jmmp as usize],
            )
            .sqrt();
            let mut acc = Float::new(work);
            for k in k_lo..=k_hi {
                let den = Integer::from(&fact[(jpm - k) as usize] * &fact[k as usize])
                    * &fact[(jmmp - k) as usize]
                    * &fact[(k + shift) as usize];
                let cos_pow = (jt - shift - 2 * k) as u32;
                let sin_pow = (2 * k + shift) as u32;
                let mut term = Float::with_val(work, (&c).pow(cos_pow));
                term *= Float::with_val(work, (&s).pow(sin_pow));
                term /= den;
                if (k + shift) % 2 != 0 {
                    acc -= term;
                } else {
                    acc += term;
                }
            }
            acc *= &root;
            out.set(row, col, Complex::real(acc));
        }
    }
    out
}

/// The chiral operator `R = e^{iπJy}`: maps `|m>` to `(-1)^{j+m} |-m>`.
pub fn chiral_operator(j: Spin, precision: Precision) -> DenseOperator {
    let bits = precision.bits();
    let n = j.dim();
    let mut r = DenseOperator::zeros(j, bits);
    for col in 0..n {
        let j_plus_m = (j.twice() + j.label_at(col).twice()) / 2;
        let sign = if j_plus_m % 2 == 0 { 1.0 } else { -1.0 };
        r.set(n - 1 - col, col, Complex::from_f64(sign, 0.0, bits));
    }
    r
}

/// `|j, m=j>`.
pub fn stretched_state(j: Spin, precision: Precision) -> Vec<Complex> {
    let bits = precision.bits();
    let mut v = vec![Complex::zero(bits); j.dim()];
    v[0] = Complex::one(bits);
    v
}
