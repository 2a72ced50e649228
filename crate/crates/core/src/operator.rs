//! Dense complex matrices in the `|j, m>` basis.

use rug::Float;

use crate::error::{Error, Result};
use crate::halfint::{HalfInt, Spin};
use crate::mp::Complex;

/// The `m`-descending basis `+j, j-1, ..., -j`; row/column `0` is `m = +j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisOrdering {
    j: Spin,
}

impl BasisOrdering {
    pub fn new(j: Spin) -> Self {
        BasisOrdering { j }
    }

    pub fn spin(&self) -> Spin {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    pub fn labels(&self) -> Vec<HalfInt> {
        self.j.labels().collect()
    }

    pub fn index_of(&self, m: HalfInt) -> Option<usize> {
        self.j.index_of(m)
    }
}

/// Square complex matrix at a fixed binary precision.
///
/// `scale` records the coupling the entries were built with (χ for the
/// Hamiltonians, 1 otherwise). `hermitian` is only ever set after checking.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    basis: BasisOrdering,
    bits: u32,
    entries: Vec<Complex>,
    scale: f64,
    hermitian: bool,
}

impl DenseOperator {
    pub fn zeros(j: Spin, bits: u32) -> Self {
        let n = j.dim();
        DenseOperator {
            basis: BasisOrdering::new(j),
            bits,
            entries: vec![Complex::zero(bits); n * n],
            scale: 1.0,
            hermitian: false,
        }
    }

    pub fn identity(j: Spin, bits: u32) -> Self {
        let mut out = Self::zeros(j, bits);
        for k in 0..out.dim() {
            out.set(k, k, Complex::one(bits));
        }
        out.hermitian = true;
        out
    }

    pub fn from_fn(j: Spin, bits: u32, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut out = Self::zeros(j, bits);
        let n = out.dim();
        for r in 0..n {
            for c in 0..n {
                let mut z = f(r, c);
                z.set_prec(bits);
                out.entries[r * n + c] = z;
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn spin(&self) -> Spin {
        self.basis.spin()
    }

    pub fn basis(&self) -> &BasisOrdering {
        &self.basis
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn get(&self, r: usize, c: usize) -> &Complex {
        &self.entries[r * self.dim() + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Complex {
        let n = self.dim();
        self.hermitian = false;
        &mut self.entries[r * n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, mut z: Complex) {
        z.set_prec(self.bits);
        *self.get_mut(r, c) = z;
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    /// Sets the Hermitian flag after verifying `A[a][b] = conj(A[b][a])` to
    /// one ulp of the working precision.
    pub fn mark_hermitian(mut self) -> Result<Self> {
        let n = self.dim();
        let ulp = Float::with_val(self.bits, Float::i_exp(1, 1 - self.bits as i32));
        for r in 0..n {
            for c in r..n {
                let a = self.get(r, c);
                let b = self.get(c, r).conj();
                let diff = (a - &b).abs();
                let mag = Float::with_val(self.bits, a.abs().max(&b.abs()));
                if diff > Float::with_val(self.bits, &ulp * &mag) {
                    return Err(Error::InternalConsistency(format!(
                        "entry ({r},{c}) breaks Hermiticity by {:.3e}",
                        diff.to_f64()
                    )));
                }
            }
        }
        self.hermitian = true;
        Ok(self)
    }

    fn check_same_shape(&self, other: &DenseOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim();
        let mut out = self.clone();
        for r in 0..n {
            for c in 0..n {
                out.entries[r * n + c] = self.get(c, r).conj();
            }
        }
        out
    }

    /// Matrix product; zero entries of either factor are skipped.
    pub fn mul(&self, other: &DenseOperator) -> Result<Self> {
        self.check_same_shape(other)?;
        let n = self.dim();
        let bits = self.bits.max(other.bits);
        let rhs_nonzero: Vec<Vec<usize>> = (0..n)
            .map(|k| (0..n).filter(|&c| !other.get(k, c).is_zero()).collect())
            .collect();
        let mut out = DenseOperator::zeros(self.spin(), bits);
        for r in 0..n {
            for (k, cols) in rhs_nonzero.iter().enumerate() {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for &c in cols {
                    out.entries[r * n + c].add_mul(a, other.get(k, c));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &DenseOperator) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.hermitian = false;
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DenseOperator) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.hermitian = false;
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a -= b;
        }
        Ok(out)
    }

    pub fn scale_real(&self, k: &Float) -> Self {
        let mut out = self.clone();
        for z in &mut out.entries {
            *z = z.scale(k);
        }
        out
    }

    pub fn scale_complex(&self, k: &Complex) -> Self {
        let mut out = self.clone();
        out.hermitian = false;
        for z in &mut out.entries {
            *z = &*z * k;
        }
        out
    }

    /// The same operator rounded (or widened) to `bits`.
    pub fn round_to(&self, bits: u32) -> Self {
        let mut out = self.clone();
        out.bits = bits;
        for z in &mut out.entries {
            z.set_prec(bits);
        }
        out
    }

    /// `self += k * other`, skipping zero entries of `other`.
    pub fn add_scaled(&mut self, k: &Complex, other: &DenseOperator) -> Result<()> {
        self.check_same_shape(other)?;
        self.hermitian = false;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            a.add_mul(k, b);
        }
        Ok(())
    }

    /// `self += k * other` for real `k`, skipping zero entries of `other`.
    pub fn add_scaled_real(&mut self, k: &Float, other: &DenseOperator) -> Result<()> {
        self.check_same_shape(other)?;
        self.hermitian = false;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            if !b.is_zero() {
                a.add_mul_real(b, k);
            }
        }
        Ok(())
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn determinant(&self) -> Complex {
        let n = self.dim();
        let mut a = self.entries.clone();
        let mut det = Complex::one(self.bits);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a[x * n + col].norm_sqr().partial_cmp(&a[y * n + col].norm_sqr()).unwrap()
                })
                .unwrap();
            if a[pivot * n + col].is_zero() {
                return Complex::zero(self.bits);
            }
            if pivot != col {
                for c in 0..n {
                    a.swap(pivot * n + c, col * n + c);
                }
                det = -det;
            }
            let inv = a[col * n + col].recip();
            det *= &a[col * n + col];
            for r in col + 1..n {
                let f = &a[r * n + col] * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let t = &f * &a[col * n + c];
                    a[r * n + c] -= &t;
                }
            }
        }
        det
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let n = self.dim();
        (0..n)
            .map(|r| (0..n).map(|c| self.get(r, c).abs_f64()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `self + shift * I`.
    pub fn shift_diagonal(&self, shift: &Float) -> Self {
        let mut out = self.clone();
        let n = self.dim();
        for k in 0..n {
            out.entries[k * n + k].re += shift;
        }
        out
    }

    /// `AB + BA`.
    pub fn anticommutator(&self, other: &DenseOperator) -> Result<Self> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &DenseOperator) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(Complex::abs_f64).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`, evaluated at full
    /// precision before rounding to `f64`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs_f64())
            .fold(0.0, f64::max))
    }

    /// `max |(A^† A - I)_{ab}|`.
    pub fn unitarity_defect(&self) -> f64 {
        let id = DenseOperator::identity(self.spin(), self.bits);
        self.adjoint().mul(self).and_then(|p| p.max_abs_diff(&id)).unwrap_or(f64::INFINITY)
    }

    pub fn apply(&self, v: &[Complex]) -> Result<Vec<Complex>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: v.len() });
        }
        Ok((0..n)
            .map(|r| {
                let mut acc = Complex::zero(self.bits);
                for (c, x) in v.iter().enumerate() {
                    acc.add_mul(self.get(r, c), x);
                }
                acc
            })
            .collect())
    }

    /// `<v|A|v>`.
    pub fn expectation(&self, v: &[Complex]) -> Result<Complex> {
        let av = self.apply(v)?;
        let mut acc = Complex::zero(self.bits);
        for (x, y) in v.iter().zip(&av) {
            acc.add_mul(&x.conj(), y);
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Complex {
        let n = self.dim();
        let mut acc = Complex::zero(self.bits);
        for k in 0..n {
            acc += self.get(k, k);
        }
        acc
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<(f64, f64)>> {
        let n = self.dim();
        (0..n).map(|r| (0..n).map(|c| self.get(r, c).to_f64()).collect()).collect()
    }
}
