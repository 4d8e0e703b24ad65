//! Correlation engine and closed forms.
//!
//! `R_fg(τ) = ∫ f(t) g(t+τ) dt`. For the complex envelope `z = x + jy`,
//! `R_zz = ∫ z*(t) z(t+τ) dt = R_Σ + jR_Δ` with `R_Σ = R_xx + R_yy` and
//! `R_Δ = R_xy - R_yx`.
//!
//! On a grid containing t = 0 with sgn(0) = 0 the discrete traces satisfy the
//! auxiliary-function identities and `R_xx R_yy - R_xy R_yx = R_Σ²/4` exactly
//! (up to rounding). Against the continuous integrals the only first-order
//! discretisation effect is at τ = 0, where the signum jump costs `R_yy(0)`
//! one sample of weight `x(0)²·dt`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::envelope::ComplexEnvelope;
use crate::error::{Error, Result};
use crate::numerics::fourier::{fft, ifft, inverse_dtft};
use crate::numerics::grid::{integer_ratio, Grid, SampledWaveform};
use crate::numerics::special::{erf_unchecked, erfc_unchecked, gamma_half, gamma_three_halves, SQRT_PI};
use crate::pulses::{sgn, PhaseModel, PulseShape, PulseSpec};
use crate::spectra::Spectrum;

/// Relative size of the truncated spectral tail above which
/// [`wiener_khinchin_correlations`] reports a coverage error.
pub const SPECTRAL_TAIL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub lags: Grid,
    pub rxx: Vec<f64>,
    pub ryy: Vec<f64>,
    pub rxy: Vec<f64>,
    pub ryx: Vec<f64>,
    pub rsum: Vec<f64>,
    pub rdelta: Vec<f64>,
    /// Factor by which the engine's unnormalised output exceeds these traces,
    /// when the closed forms are energy-normalised (rectangular pulse).
    pub normalization: Option<f64>,
}

impl CorrelationResult {
    fn from_parts(lags: Grid, rxx: Vec<f64>, ryy: Vec<f64>, rxy: Vec<f64>, ryx: Vec<f64>) -> Self {
        let rsum = rxx.iter().zip(&ryy).map(|(a, b)| a + b).collect();
        let rdelta = rxy.iter().zip(&ryx).map(|(a, b)| a - b).collect();
        Self { lags, rxx, ryy, rxy, ryx, rsum, rdelta, normalization: None }
    }

    /// Traces in CSV column order: Rxx, Ryy, Rxy, Ryx, Rsum, Rdelta.
    pub fn traces(&self) -> [&[f64]; 6] {
        [&self.rxx, &self.ryy, &self.rxy, &self.ryx, &self.rsum, &self.rdelta]
    }

    fn traces_mut(&mut self) -> [&mut Vec<f64>; 6] {
        [&mut self.rxx, &mut self.ryy, &mut self.rxy, &mut self.ryx, &mut self.rsum, &mut self.rdelta]
    }

    /// Each trace divided by its own peak magnitude (all-zero traces stay zero).
    pub fn normalized(&self) -> Self {
        let mut out = self.clone();
        for trace in out.traces_mut() {
            let peak = trace.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if peak > 0.0 {
                trace.iter_mut().for_each(|v| *v /= peak);
            }
        }
        out
    }

    /// Value of R_Σ at τ = 0, or its peak when 0 is not a lag.
    pub fn rsum_at_zero(&self) -> f64 {
        match self.lags.zero_index() {
            Some(k) => self.rsum[k],
            None => self.rsum.iter().copied().fold(f64::MIN, f64::max),
        }
    }
}

/// Integer sample lags for every point of `lags` on a grid of step `dt`.
fn integer_lags(lags: &Grid, dt: f64) -> Result<Vec<i64>> {
    let start = integer_ratio(lags.time(0), dt);
    let stride = integer_ratio(lags.dt, dt);
    match (start, stride) {
        (Some(s), Some(m)) if m > 0 => Ok((0..lags.n as i64).map(|i| s + i * m).collect()),
        _ => Err(Error::GridAlignment(format!(
            "lags (start {}, step {}) must be integer multiples of the sample step {dt}",
            lags.time(0),
            lags.dt
        ))),
    }
}

/// FFT-based correlator for signals sharing one grid.
struct Correlator {
    n: usize,
    len: usize,
    dt: f64,
}

impl Correlator {
    fn new(grid: &Grid) -> Self {
        Self { n: grid.n, len: (2 * grid.n).next_power_of_two(), dt: grid.dt }
    }

    fn spectrum(&self, v: &[f64]) -> Vec<Complex64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.len];
        for (b, s) in buf.iter_mut().zip(v) {
            *b = Complex64::new(*s, 0.0);
        }
        fft(&mut buf);
        buf
    }

    /// `dt·Σ_k f_k g_{k+L}` at each requested integer lag.
    fn correlate(&self, f: &[Complex64], g: &[Complex64], lags: &[i64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = f.iter().zip(g).map(|(a, b)| a.conj() * b).collect();
        ifft(&mut buf);
        let scale = self.dt / self.len as f64;
        let span = self.n as i64 - 1;
        lags.iter()
            .map(|&l| {
                if l.abs() > span {
                    0.0
                } else {
                    buf[l.rem_euclid(self.len as i64) as usize].re * scale
                }
            })
            .collect()
    }
}

/// `R_fg(τ)` at each lag of `lags`.
pub fn correlate(f: &SampledWaveform, g: &SampledWaveform, lags: &Grid) -> Result<Vec<f64>> {
    if !f.grid.matches(&g.grid) {
        return Err(Error::GridMismatch("correlated waveforms must share a grid".into()));
    }
    let l = integer_lags(lags, f.grid.dt)?;
    let c = Correlator::new(&f.grid);
    Ok(c.correlate(&c.spectrum(&f.samples), &c.spectrum(&g.samples), &l))
}

/// All six traces of the complex autocorrelation of `z`.
pub fn complex_autocorrelation(z: &ComplexEnvelope, lags: &Grid) -> Result<CorrelationResult> {
    let l = integer_lags(lags, z.grid.dt)?;
    let c = Correlator::new(&z.grid);
    let (xs, ys) = (c.spectrum(&z.x), c.spectrum(&z.y));
    Ok(CorrelationResult::from_parts(
        *lags,
        c.correlate(&xs, &xs, &l),
        c.correlate(&ys, &ys, &l),
        c.correlate(&xs, &ys, &l),
        c.correlate(&ys, &xs, &l),
    ))
}

/// Triangle of half-base `width` and unit peak.
pub fn triangle(tau: f64, width: f64) -> f64 {
    (1.0 - tau.abs() / width).max(0.0)
}

/// Closed-form traces for the Laplacian, Gaussian, rectangular and
/// Hermite-Gaussian pulses with hard-signum phase.
///
/// The rectangular traces are energy-normalised (`R_xx(0) = 1`); the
/// engine output is `normalization = 2κ` times larger.
pub fn closed_form_correlations(spec: &PulseSpec, lags: &Grid) -> Result<CorrelationResult> {
    spec.validate()?;
    if spec.phase != PhaseModel::HardSignum {
        return Err(Error::Domain("closed-form correlations exist only for the hard-signum phase".into()));
    }
    let taus = lags.times();
    let mut normalization = None;
    // Each closure returns (Rxx, Ryy, Rdelta).
    let eval: Box<dyn Fn(f64) -> (f64, f64, f64)> = match spec.shape {
        PulseShape::Laplacian { beta } => Box::new(move |t: f64| {
            let e = (-beta * t.abs()).exp();
            let bt = beta * t.abs();
            ((1.0 + bt) * e / beta, (1.0 - bt) * e / beta, 2.0 * t * e)
        }),
        PulseShape::Gaussian { alpha } => Box::new(move |t: f64| {
            let g = (PI / 2.0).sqrt() * (-(alpha * t).powi(2) / 2.0).exp() / alpha;
            let e = erf_unchecked(alpha * t / SQRT_2);
            (g, g * (1.0 - 2.0 * e.abs()), 2.0 * g * e)
        }),
        PulseShape::Rect { kappa } => {
            normalization = Some(2.0 * kappa);
            rect_traces(kappa)
        }
        PulseShape::SoftRect { gamma, kappa } if gamma.is_infinite() => {
            normalization = Some(2.0 * kappa);
            rect_traces(kappa)
        }
        PulseShape::HermiteGaussian { lambda } => Box::new(move |t: f64| {
            let ryy = hermite_ryy(lambda, t);
            let rxx = hermite_rsum(lambda, t) - ryy;
            (rxx, ryy, sgn(t) * (rxx - ryy))
        }),
        other => {
            return Err(Error::Domain(format!("no closed-form correlations for {}", other.name())))
        }
    };
    let mut rxx = Vec::with_capacity(lags.n);
    let mut ryy = Vec::with_capacity(lags.n);
    let mut rxy = Vec::with_capacity(lags.n);
    let mut ryx = Vec::with_capacity(lags.n);
    for t in taus {
        let (a, b, d) = eval(t);
        rxx.push(a);
        ryy.push(b);
        rxy.push(d / 2.0);
        ryx.push(-d / 2.0);
    }
    let mut res = CorrelationResult::from_parts(*lags, rxx, ryy, rxy, ryx);
    res.normalization = normalization;
    Ok(res)
}

fn rect_traces(kappa: f64) -> Box<dyn Fn(f64) -> (f64, f64, f64)> {
    Box::new(move |t: f64| {
        let rxx = triangle(t, 2.0 * kappa);
        let rsum = 2.0 * triangle(t, kappa);
        (rxx, rsum - rxx, sgn(t) * triangle(t.abs() - kappa, kappa))
    })
}

/// `R_yy` of `y = t·exp(-λ²t²/2)`.
pub fn hermite_ryy(lambda: f64, tau: f64) -> f64 {
    let lt2 = (lambda * tau).powi(2);
    SQRT_PI * (2.0 - lt2) * (-lt2 / 4.0).exp() / (4.0 * lambda.powi(3))
}

/// `R_Σ` of the Hermite-Gaussian pulse in incomplete-gamma form.
pub fn hermite_rsum(lambda: f64, tau: f64) -> f64 {
    let lt2 = (lambda * tau).powi(2);
    let zeta = lt2 / 4.0;
    let g = (-zeta).exp() / (2.0 * lambda.powi(3));
    g * (4.0 * gamma_three_halves(zeta) - lt2 * gamma_half(zeta))
}

/// The same `R_Σ` in the expanded erfc form.
pub fn hermite_rsum_expanded(lambda: f64, tau: f64) -> f64 {
    let lt = lambda * tau.abs();
    let lt2 = lt * lt;
    (2.0 * lt * (-lt2 / 2.0).exp() - SQRT_PI * (lt2 - 2.0) * (-lt2 / 4.0).exp() * erfc_unchecked(lt / 2.0))
        / (2.0 * lambda.powi(3))
}

/// `R_xx(τ)/R_xx(0)` of the Hermite-Gaussian pulse at λ² = 1/2, as displayed
/// for that special case.
pub fn hermite_rxx_normalized_half(tau: f64) -> f64 {
    let t2 = tau * tau;
    let zeta = t2 / 8.0;
    (16.0 * gamma_three_halves(zeta) - 2.0 * t2 * gamma_half(zeta) + SQRT_PI * (t2 - 4.0))
        * (-zeta).exp()
        / (4.0 * SQRT_PI)
}

/// Auxiliary integrals `A = ∫₀^∞ f(t)f(t+τ)dt` and `B = ∫_{-τ}^0 f(t)f(t+τ)dt`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuxiliaryPair {
    pub tau: f64,
    pub a: f64,
    pub b: f64,
}

/// Correlations implied by an auxiliary pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpliedCorrelations {
    pub rxx: f64,
    pub ryy: f64,
    pub rsum: f64,
    pub rdelta: f64,
}

impl AuxiliaryPair {
    /// Pair computed over a symmetric `x` with `y = x·sgn(t)`.
    pub fn unimodal(&self) -> ImpliedCorrelations {
        let (a, b) = (self.a, self.b);
        ImpliedCorrelations {
            rxx: 2.0 * a + b,
            ryy: 2.0 * a - b,
            rsum: 4.0 * a,
            rdelta: 2.0 * sgn(self.tau) * b,
        }
    }

    /// Pair computed over an antisymmetric `y` with `x = y·sgn(t)`.
    pub fn bimodal(&self) -> ImpliedCorrelations {
        let (a, b) = (self.a, self.b.abs());
        ImpliedCorrelations {
            rxx: 2.0 * a + b,
            ryy: 2.0 * a - b,
            rsum: 4.0 * a,
            rdelta: 2.0 * sgn(self.tau) * b,
        }
    }
}

/// Trapezoidal `A(τ)` and `B(τ)` of `f` for τ ≥ 0; `0` and `-τ` must be samples.
pub fn auxiliary_ab(f: &SampledWaveform, tau: f64) -> Result<AuxiliaryPair> {
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("τ must be ≥ 0, got {tau}")));
    }
    let k0 = f.grid.zero_index().ok_or_else(|| {
        Error::GridAlignment("auxiliary integrals need t = 0 as a grid sample".into())
    })?;
    let l = integer_ratio(tau, f.grid.dt)
        .ok_or_else(|| Error::GridAlignment(format!("τ = {tau} is not a multiple of dt")))?
        as usize;
    if l > k0 {
        return Err(Error::GridAlignment(format!("-τ = {} lies before the grid start", -tau)));
    }
    let s = &f.samples;
    let n = s.len();
    let prod = |k: usize| if k + l < n { s[k] * s[k + l] } else { 0.0 };
    let a = 0.5 * prod(k0) + (k0 + 1..n).map(prod).sum::<f64>();
    let b = if l == 0 {
        0.0
    } else {
        0.5 * (prod(k0 - l) + prod(k0)) + (k0 - l + 1..k0).map(prod).sum::<f64>()
    };
    let dt = f.grid.dt;
    Ok(AuxiliaryPair { tau, a: a * dt, b: b * dt })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeterminantReport {
    /// max |R_xx R_yy - R_xy R_yx - R_Σ²/4|
    pub max_abs: f64,
    /// `max_abs` relative to R_Σ(0)²/4.
    pub relative: f64,
}

/// Checks `R_xx R_yy - R_xy R_yx = R_Σ²/4` pointwise.
pub fn determinant_identity(res: &CorrelationResult) -> DeterminantReport {
    let max_abs = (0..res.rxx.len())
        .map(|k| {
            let det = res.rxx[k] * res.ryy[k] - res.rxy[k] * res.ryx[k];
            (det - res.rsum[k].powi(2) / 4.0).abs()
        })
        .fold(0.0, f64::max);
    let scale = res.rsum_at_zero().powi(2) / 4.0;
    let relative = if scale > 0.0 { max_abs / scale } else { max_abs };
    DeterminantReport { max_abs, relative }
}

/// `(R_Σ, R_Δ)` on `lags` from the spectrum: `R_Σ = F⁻¹{X² + Y²}` and
/// `R_Δ = sgn(τ)·F⁻¹{X² - Y²}`.
///
/// Signum constructions have `|W|² ~ C/ω²`; the neglected tail beyond the
/// grid contributes about `|W(Ω)|²·Ω/π` at τ = 0, and a coverage error is
/// raised when that exceeds 1e-3 of the peak.
pub fn wiener_khinchin_correlations(sp: &Spectrum, lags: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
    let power: Vec<Complex64> =
        sp.re.iter().zip(&sp.im).map(|(x, y)| Complex64::new(x * x + y * y, 0.0)).collect();
    let diff: Vec<Complex64> =
        sp.re.iter().zip(&sp.im).map(|(x, y)| Complex64::new(x * x - y * y, 0.0)).collect();
    let rsum: Vec<f64> = inverse_dtft(&power, &sp.omega, lags)?.iter().map(|c| c.re).collect();
    let taus = lags.times();
    let rdelta: Vec<f64> = inverse_dtft(&diff, &sp.omega, lags)?
        .iter()
        .zip(&taus)
        .map(|(c, t)| sgn(*t) * c.re)
        .collect();

    let edge = |k: usize| power[k].re * sp.omega.time(k).abs();
    let tail = edge(0).max(edge(sp.omega.n - 1)) / PI;
    let peak = rsum.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if peak > 0.0 && tail > SPECTRAL_TAIL_TOL * peak {
        return Err(Error::Coverage(format!(
            "spectral tail beyond ±{:.3e} rad/s carries ~{:.2e} of R_Σ(0); widen the ω grid",
            sp.omega.end(),
            tail / peak
        )));
    }
    Ok((rsum, rdelta))
}
