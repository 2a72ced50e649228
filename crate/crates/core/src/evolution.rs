//! Time evolution under `H_TA` and the squeezing observables.
//!
//! `U(t) = Σ_k e^{-iλ_k χt} P_k` with `P_k = Π_{n≠k} (H/χ - λ_n)/(λ_k - λ_n)`
//! over the distinct eigenvalues of `H/χ`. `H` is Hermitian, so running the
//! interpolation over distinct eigenvalues covers the degenerate spins as
//! well. The projectors are built once per spin; every time point is then
//! an independent sum.

use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::Spin;
use crate::mp::{pi, Complex, Precision};
use crate::operator::DenseOperator;
use crate::spectrum::{spectrum, SpectrumReport};
use crate::spin_algebra::{build_cartesian, build_h_ta, stretched_state, wigner_rotation_y, Angle, Cartesian};

/// Digits kept beyond the requested precision in propagators and states.
const OUTPUT_GUARD: u32 = 5;
/// Digits added on top of the cancellation estimate for the projectors.
const INTERPOLATION_GUARD: u32 = 10;

/// A pure state in the `m`-descending basis.
#[derive(Clone, Debug)]
pub struct StateVector {
    j: Spin,
    amplitudes: Vec<Complex>,
}

impl StateVector {
    pub fn new(j: Spin, amplitudes: Vec<Complex>, p: Precision) -> Result<Self> {
        if amplitudes.len() != j.dim() {
            return Err(Error::DimensionMismatch { expected: j.dim(), actual: amplitudes.len() });
        }
        let s = StateVector { j, amplitudes };
        let defect = (s.norm_sqr() - 1u32).abs().to_f64();
        if defect > p.tolerance() {
            return Err(Error::InvalidInput(format!("state is not normalized (|1 - <ψ|ψ>| = {defect:.3e})")));
        }
        Ok(s)
    }

    pub fn spin(&self) -> Spin {
        self.j
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> Float {
        let bits = self.amplitudes.first().map(Complex::prec).unwrap_or(64);
        self.amplitudes.iter().fold(Float::new(bits), |acc, z| acc + z.norm_sqr())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PropagatorMethod {
    Spectral,
    TaylorOracle,
}

#[derive(Clone, Debug)]
pub struct Propagator {
    pub matrix: DenseOperator,
    pub chi_t: f64,
    pub method: PropagatorMethod,
}

/// Cached spectral projectors of `H_TA/χ` for one spin.
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    j: Spin,
    precision: Precision,
    /// Distinct eigenvalues of `H/χ`, at the interpolation precision.
    eigenvalues: Vec<Float>,
    projectors: Vec<DenseOperator>,
}

/// Digits lost to cancellation in the Lagrange products: the log10 of
/// `max_k Π_{n≠k} (ρ + |λ_n|) / |λ_k - λ_n|`.
fn interpolation_guard(lam: &[Float]) -> u32 {
    let rho = lam.iter().fold(0.0f64, |a, x| a.max(x.to_f64().abs()));
    let worst = (0..lam.len())
        .map(|k| {
            (0..lam.len())
                .filter(|&n| n != k)
                .map(|n| {
                    let gap = Float::with_val(lam[k].prec(), &lam[k] - &lam[n]).to_f64().abs();
                    (rho + lam[n].to_f64().abs()).log10() - gap.log10()
                })
                .sum::<f64>()
        })
        .fold(0.0f64, f64::max);
    worst.max(0.0).ceil() as u32
}

impl SpectralPropagator {
    pub fn new(j: Spin, p: Precision) -> Result<Self> {
        if j.twice() == 0 {
            return Ok(Self::trivial(j, p));
        }
        let report = spectrum(j, p)?;
        Self::from_spectrum(&report, p)
    }

    /// Uses `report` for the eigenvalues when it is precise enough and
    /// recomputes the spectrum at the interpolation precision otherwise.
    /// `h` fixes the spin; the projectors are built from `H_TA/χ` itself.
    pub fn from_report(report: &SpectrumReport, h: &DenseOperator, p: Precision) -> Result<Self> {
        if h.spin() != report.j {
            return Err(Error::DimensionMismatch { expected: report.j.dim(), actual: h.dim() });
        }
        Self::from_spectrum(report, p)
    }

    fn trivial(j: Spin, p: Precision) -> Self {
        let bits = p.guarded(OUTPUT_GUARD).bits();
        SpectralPropagator {
            j,
            precision: p,
            eigenvalues: vec![Float::new(bits)],
            projectors: vec![DenseOperator::identity(j, bits)],
        }
    }

    fn from_spectrum(report: &SpectrumReport, p: Precision) -> Result<Self> {
        let j = report.j;
        let lam = report.distinct();
        let sep = 10f64.powi(-(p.digits() as i32) / 2);
        for w in lam.windows(2) {
            if Float::with_val(w[1].prec(), &w[1] - &w[0]).to_f64() < sep {
                return Err(Error::IllConditioned(w[0].to_f64(), w[1].to_f64()));
            }
        }
        let wp = p.guarded(interpolation_guard(&lam) + INTERPOLATION_GUARD);
        let report = if report.precision >= wp { report.clone() } else { spectrum(j, wp)? };
        let wb = wp.bits();
        let eigenvalues: Vec<Float> =
            report.distinct().into_iter().map(|x| Float::with_val(wb, x)).collect();
        let d = eigenvalues.len();

        let h = build_h_ta(j, 1.0, wp);
        let mut powers = vec![DenseOperator::identity(j, wb)];
        for _ in 1..d {
            let next = h.mul(powers.last().unwrap())?;
            powers.push(next);
        }

        let out_bits = p.guarded(OUTPUT_GUARD).bits();
        let projectors = (0..d)
            .into_par_iter()
            .map(|k| {
                // ascending coefficients of Π_{n≠k} (x - λ_n) / (λ_k - λ_n)
                let mut num = vec![Float::with_val(wb, 1)];
                let mut den = Float::with_val(wb, 1);
                for (n, ln) in eigenvalues.iter().enumerate() {
                    if n == k {
                        continue;
                    }
                    let mut next = vec![Float::new(wb); num.len() + 1];
                    for (i, c) in num.iter().enumerate() {
                        next[i + 1] += c;
                        next[i] -= Float::with_val(wb, c * ln);
                    }
                    num = next;
                    den *= Float::with_val(wb, &eigenvalues[k] - ln);
                }
                let mut pk = DenseOperator::zeros(j, wb);
                for (c, hp) in num.iter().zip(&powers) {
                    pk.add_scaled_real(&Float::with_val(wb, c / &den), hp)?;
                }
                Ok(pk.round_to(out_bits))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralPropagator { j, precision: p, eigenvalues, projectors })
    }

    pub fn spin(&self) -> Spin {
        self.j
    }

    pub fn eigenvalues(&self) -> &[Float] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[DenseOperator] {
        &self.projectors
    }

    /// `U` at dimensionless time `χt`.
    pub fn at(&self, chi_t: &Float) -> Propagator {
        let out_bits = self.precision.guarded(OUTPUT_GUARD).bits();
        let mut u = DenseOperator::zeros(self.j, out_bits);
        for (lam, pk) in self.eigenvalues.iter().zip(&self.projectors) {
            let phase = -Float::with_val(lam.prec(), lam * chi_t);
            let mut e = Complex::expi(&phase);
            e.set_prec(out_bits);
            u.add_scaled(&e, pk).expect("projectors share the spin");
        }
        Propagator { matrix: u, chi_t: chi_t.to_f64(), method: PropagatorMethod::Spectral }
    }

    pub fn at_f64(&self, chi_t: f64) -> Propagator {
        self.at(&Float::with_val(self.precision.bits(), chi_t))
    }
}

/// Spectral propagator for a single time. Prefer [`SpectralPropagator`] when
/// evaluating many times.
pub fn propagator_spectral(
    chi_t: f64,
    report: &SpectrumReport,
    h: &DenseOperator,
    p: Precision,
) -> Result<Propagator> {
    Ok(SpectralPropagator::from_report(report, h, p)?.at_f64(chi_t))
}

/// `e^{-iHt}` by scaling and squaring of a truncated Taylor series, with
/// `t = χt / χ` and `χ = h.scale()`. Independent of the spectrum.
pub fn propagator_taylor(h: &DenseOperator, chi_t: f64, p: Precision) -> Propagator {
    let j = h.spin();
    let chi = if h.scale() != 0.0 { h.scale() } else { 1.0 };
    let norm = h.norm_inf() * (chi_t / chi).abs();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let wb = p.bits() + 2 * squarings + 40;
    let factor = (Float::with_val(wb, chi_t) / chi) >> squarings as i32;
    // B = -i H t / 2^s
    let b = h.round_to(wb).scale_complex(&Complex::imag(-factor));
    let id = DenseOperator::identity(j, wb);
    let mut sum = id.clone();
    let mut term = id;
    let eps = 2f64.powi(-(wb as i32));
    for k in 1..1000u32 {
        term = term.mul(&b).expect("same shape").scale_real(&Float::with_val(wb, k).recip());
        sum = sum.add(&term).expect("same shape");
        if term.max_abs() < eps {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum).expect("same shape");
    }
    Propagator {
        matrix: sum.round_to(p.guarded(OUTPUT_GUARD).bits()),
        chi_t,
        method: PropagatorMethod::TaylorOracle,
    }
}

/// `e^{iπJy/2}|j, j⟩`, the stretched state turned onto the x axis. With
/// `Jy = (J+ - J-)/2i` this points along `-x`: amplitudes
/// `(-1)^{j-m} sqrt(C(2j, j-m)) / 2^j` and `⟨Jx⟩ = -j`.
pub fn coherent_initial_state(j: Spin, p: Precision) -> StateVector {
    let bits = p.guarded(OUTPUT_GUARD).bits();
    let rot = wigner_rotation_y(j, Angle::pi_times(-1, 2), p.guarded(OUTPUT_GUARD));
    let amplitudes = rot
        .apply(&stretched_state(j, p.guarded(OUTPUT_GUARD)))
        .expect("same spin")
        .into_iter()
        .map(|mut z| {
            z.set_prec(bits);
            z
        })
        .collect();
    StateVector { j, amplitudes }
}

/// `U† O U`.
pub fn heisenberg_operator(u: &Propagator, o: &DenseOperator) -> Result<DenseOperator> {
    u.matrix.adjoint().mul(&o.mul(&u.matrix)?)
}

/// `⟨ψ|U† O U|ψ⟩`, bracketed as `⟨Uψ|O|Uψ⟩`.
pub fn heisenberg_expectation(state: &StateVector, u: &Propagator, o: &DenseOperator) -> Result<Complex> {
    let phi = u.matrix.apply(&state.amplitudes)?;
    o.expectation(&phi)
}

/// Means, second moments and symmetrised cross moments of the spin
/// components at one time.
#[derive(Clone, Debug)]
pub struct ObservableSet {
    pub j: Spin,
    pub precision: Precision,
    /// `⟨Jx⟩, ⟨Jy⟩, ⟨Jz⟩`.
    pub mean: [Float; 3],
    /// `⟨Jx²⟩, ⟨Jy²⟩, ⟨Jz²⟩`.
    pub second: [Float; 3],
    /// `⟨JyJz + JzJy⟩ / 2`.
    pub sym_yz: Float,
    /// `⟨JxJz + JzJx⟩ / 2`.
    pub sym_xz: Float,
    /// Largest imaginary part met in the means.
    pub max_imag: f64,
}

impl ObservableSet {
    pub fn var_y(&self) -> Float {
        self.second[1].clone() - Float::with_val(self.mean[1].prec(), self.mean[1].square_ref())
    }

    pub fn var_z(&self) -> Float {
        self.second[2].clone() - Float::with_val(self.mean[2].prec(), self.mean[2].square_ref())
    }

    pub fn cov_yz(&self) -> Float {
        Float::with_val(self.sym_yz.prec(), &self.sym_yz - Float::with_val(self.sym_yz.prec(), &self.mean[1] * &self.mean[2]))
    }

    /// `⟨J²⟩`.
    pub fn casimir(&self) -> Float {
        Float::with_val(self.second[0].prec(), &self.second[0] + &self.second[1]) + &self.second[2]
    }
}

fn inner(a: &[Complex], b: &[Complex]) -> Complex {
    let mut acc = Complex::zero(a.first().map(Complex::prec).unwrap_or(64));
    for (x, y) in a.iter().zip(b) {
        acc.add_mul(&x.conj(), y);
    }
    acc
}

fn expectations_with(state: &StateVector, u: &Propagator, ops: &Cartesian, p: Precision) -> Result<ObservableSet> {
    let phi = u.matrix.apply(&state.amplitudes)?;
    let jx = ops.x.apply(&phi)?;
    let jy = ops.y.apply(&phi)?;
    let jz = ops.z.apply(&phi)?;
    let means = [inner(&phi, &jx), inner(&phi, &jy), inner(&phi, &jz)];
    let max_imag = means.iter().map(|z| z.im.to_f64().abs()).fold(0.0, f64::max);
    let scale = state.j.as_f64().max(1.0);
    if max_imag > p.tolerance() * scale {
        return Err(Error::InternalConsistency(format!(
            "expectation of a Hermitian operator has imaginary part {max_imag:.3e}"
        )));
    }
    let [mx, my, mz] = means.map(|z| z.re);
    Ok(ObservableSet {
        j: state.j,
        precision: p,
        mean: [mx, my, mz],
        second: [inner(&jx, &jx).re, inner(&jy, &jy).re, inner(&jz, &jz).re],
        sym_yz: inner(&jy, &jz).re,
        sym_xz: inner(&jx, &jz).re,
        max_imag,
    })
}

pub fn heisenberg_expectations(state: &StateVector, u: &Propagator, p: Precision) -> Result<ObservableSet> {
    let j = state.j;
    if u.matrix.spin() != j {
        return Err(Error::DimensionMismatch { expected: j.dim(), actual: u.matrix.dim() });
    }
    expectations_with(state, u, &build_cartesian(j, p.guarded(OUTPUT_GUARD)), p)
}

/// `|⟨Jx⟩|` large enough for the squeezing parameters to be defined.
fn mean_spin(obs: &ObservableSet) -> Option<Float> {
    let m = Float::with_val(obs.mean[0].prec(), obs.mean[0].abs_ref());
    let floor = 10f64.powi(-(obs.precision.digits() as i32) / 2);
    (m > floor).then_some(m)
}

fn sqrt_nonneg(x: Float, tol: f64) -> Float {
    if x < 0 && x.to_f64() > -tol {
        return Float::new(x.prec());
    }
    x.sqrt()
}

fn wineland(obs: &ObservableSet, variance: Float) -> Option<Float> {
    let m = mean_spin(obs)?;
    let prefactor = Float::with_val(m.prec(), obs.j.twice()).sqrt();
    let tol = obs.precision.tolerance() * obs.j.as_f64().max(1.0);
    Some(prefactor * sqrt_nonneg(variance, tol) / m)
}

/// `ξ_y = sqrt(2j) ΔJy / |⟨Jx⟩|`; `None` where `⟨Jx⟩` vanishes.
pub fn xi_y(obs: &ObservableSet) -> Option<Float> {
    wineland(obs, obs.var_y())
}

/// `ξ_z = sqrt(2j) ΔJz / |⟨Jx⟩|`; `None` where `⟨Jx⟩` vanishes.
pub fn xi_z(obs: &ObservableSet) -> Option<Float> {
    wineland(obs, obs.var_z())
}

/// `⟨JxJz + JzJx⟩`.
pub fn correlation_xz(obs: &ObservableSet) -> Float {
    Float::with_val(obs.sym_xz.prec(), &obs.sym_xz * 2u32)
}

#[derive(Clone, Debug)]
pub struct OptimalSqueezing {
    pub xi: Float,
    /// `φ ∈ [0, π)` of the quadrature `cos φ Jy + sin φ Jz`.
    pub angle: Float,
}

/// Minimum of the squeezing parameter over quadratures `cos φ Jy + sin φ Jz`,
/// from the smaller eigenvalue of the `(Jy, Jz)` covariance matrix. The angle
/// is reported as 0 when the covariance is isotropic.
pub fn optimal_xi(obs: &ObservableSet) -> Option<OptimalSqueezing> {
    let bits = obs.mean[0].prec();
    let (vy, vz, c) = (obs.var_y(), obs.var_z(), obs.cov_yz());
    let half_diff = Float::with_val(bits, &vy - &vz) / 2u32;
    let mid = Float::with_val(bits, &vy + &vz) / 2u32;
    let radius = Float::with_val(bits, half_diff.square_ref()) + Float::with_val(bits, c.square_ref());
    let radius = radius.sqrt();
    let xi = wineland(obs, Float::with_val(bits, &mid - &radius))?;
    let scale = mid.to_f64().abs().max(1.0);
    let angle = if radius.to_f64() <= obs.precision.tolerance() * scale {
        Float::new(bits)
    } else {
        let pi = pi(bits);
        let two_c = Float::with_val(bits, &c * 2u32);
        let diff = Float::with_val(bits, &vy - &vz);
        let mut phi = two_c.atan2(&diff) / 2u32 + Float::with_val(bits, &pi / 2u32);
        if phi >= pi {
            phi -= &pi;
        }
        if phi < 0 {
            phi += &pi;
        }
        phi
    };
    Some(OptimalSqueezing { xi, angle })
}

/// One grid point of a squeezing time series. `None` marks an undefined
/// squeezing parameter.
#[derive(Clone, Debug)]
pub struct TimeRow {
    pub chi_t: Float,
    pub jx_mean: Float,
    pub var_jy: Float,
    pub var_jz: Float,
    pub xi_y: Option<Float>,
    pub xi_z: Option<Float>,
    pub corr_xz: Float,
    pub xi_opt: Option<Float>,
    pub opt_angle: Option<Float>,
}

impl TimeRow {
    pub const COLUMNS: [&'static str; 9] =
        ["chi_t", "jx_mean", "var_jy", "var_jz", "xi_y", "xi_z", "corr_xz", "xi_opt", "opt_angle"];

    pub fn values(&self) -> [Option<&Float>; 9] {
        let opt = self.xi_opt.as_ref();
        [
            Some(&self.chi_t),
            Some(&self.jx_mean),
            Some(&self.var_jy),
            Some(&self.var_jz),
            self.xi_y.as_ref(),
            self.xi_z.as_ref(),
            Some(&self.corr_xz),
            opt,
            self.opt_angle.as_ref(),
        ]
    }
}

#[derive(Clone, Debug)]
pub struct TimeSeries {
    pub j: Spin,
    pub chi: f64,
    pub omega: f64,
    pub precision: Precision,
    pub rows: Vec<TimeRow>,
}

impl TimeSeries {
    pub fn grid(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.chi_t.to_f64()).collect()
    }

    /// A named column as `f64`, gaps as `None`.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = TimeRow::COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values()[idx].map(Float::to_f64)).collect())
    }
}

#[derive(Clone, Debug)]
pub struct SeriesConfig {
    pub j: Spin,
    pub chi: f64,
    /// Field strength of `Ω Jz`; nonzero values use the Taylor propagator.
    pub omega: f64,
    pub t_max: f64,
    pub steps: usize,
    pub precision: Precision,
}

fn row_from(chi_t: Float, obs: &ObservableSet) -> TimeRow {
    let opt = optimal_xi(obs);
    TimeRow {
        chi_t,
        jx_mean: obs.mean[0].clone(),
        var_jy: obs.var_y(),
        var_jz: obs.var_z(),
        xi_y: xi_y(obs),
        xi_z: xi_z(obs),
        corr_xz: correlation_xz(obs),
        xi_opt: opt.as_ref().map(|o| o.xi.clone()),
        opt_angle: opt.map(|o| o.angle),
    }
}

/// Squeezing observables on the uniform grid `χt_k = t_max k / (steps - 1)`,
/// each point evolved directly from `t = 0`.
pub fn time_series(cfg: &SeriesConfig) -> Result<TimeSeries> {
    if cfg.steps < 2 {
        return Err(Error::InvalidInput(format!("steps must be at least 2, got {}", cfg.steps)));
    }
    if !(cfg.t_max > 0.0 && cfg.t_max.is_finite()) {
        return Err(Error::InvalidInput(format!("t_max must be positive, got {}", cfg.t_max)));
    }
    if !cfg.chi.is_finite() || !cfg.omega.is_finite() {
        return Err(Error::InvalidInput("chi and omega must be finite".into()));
    }
    let (j, p) = (cfg.j, cfg.precision);
    let state = coherent_initial_state(j, p);
    let ops = build_cartesian(j, p.guarded(OUTPUT_GUARD));
    let bits = p.guarded(OUTPUT_GUARD).bits();
    let grid: Vec<Float> = (0..cfg.steps)
        .map(|k| Float::with_val(bits, cfg.t_max) * k as u32 / (cfg.steps - 1) as u32)
        .collect();

    let rows: Vec<TimeRow> = if cfg.omega == 0.0 || j.twice() == 0 {
        let sp = SpectralPropagator::new(j, p)?;
        grid.into_par_iter()
            .map(|t| {
                let u = sp.at(&t);
                expectations_with(&state, &u, &ops, p).map(|obs| row_from(t, &obs))
            })
            .collect::<Result<_>>()?
    } else {
        let h = crate::spin_algebra::build_h_f(j, cfg.chi, cfg.omega, p.guarded(OUTPUT_GUARD));
        grid.into_par_iter()
            .map(|t| {
                let u = propagator_taylor(&h, t.to_f64(), p);
                expectations_with(&state, &u, &ops, p).map(|obs| row_from(t, &obs))
            })
            .collect::<Result<_>>()?
    };
    Ok(TimeSeries { j, chi: cfg.chi, omega: cfg.omega, precision: p, rows })
}
