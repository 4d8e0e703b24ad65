//! Spectra `W(ω) = X(ω) + jY(ω)` of causal pulses and the Hilbert-pair check.
//!
//! `X` is the transform of the symmetric component and `jY` that of the
//! antisymmetric one, so for a causal `w` they satisfy `Y = -H{X}`.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::fourier::dtft;
use crate::numerics::grid::{Grid, SampledWaveform};
use crate::numerics::hilbert::hilbert;
use crate::numerics::special::{dawson_unchecked, SQRT_PI};
use crate::pulses::{PhaseModel, PulseShape, PulseSpec, COVERAGE_TOL};

/// Real and imaginary parts of a spectrum on a uniform ω grid (rad/s).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub omega: Grid,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl Spectrum {
    pub fn new(omega: Grid, re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != omega.n || im.len() != omega.n {
            return Err(Error::GridMismatch(format!(
                "{} real and {} imaginary values on an ω grid of {}",
                re.len(),
                im.len(),
                omega.n
            )));
        }
        Ok(Self { omega, re, im })
    }

    pub fn real_part(&self) -> SampledWaveform {
        SampledWaveform { grid: self.omega, samples: self.re.clone() }
    }

    pub fn imag_part(&self) -> SampledWaveform {
        SampledWaveform { grid: self.omega, samples: self.im.clone() }
    }
}

/// Default symmetric ω grid: ±40 spectral scales at 1/100 of a scale.
pub fn default_omega_grid(shape: &PulseShape) -> Result<Grid> {
    shape.validate()?;
    let scale = 1.0 / shape.characteristic_width();
    Grid::symmetric(4000, scale / 100.0)
}

/// Analytic `X(ω)`, `Y(ω)` for the Gaussian, Laplacian and Hermite-Gaussian
/// pulses with the hard signum phase.
pub fn closed_form_spectrum(spec: &PulseSpec, omega: &Grid) -> Result<Spectrum> {
    spec.validate()?;
    if spec.phase != PhaseModel::HardSignum {
        return Err(Error::Domain("closed-form spectra exist only for the hard-signum phase".into()));
    }
    let pair: Box<dyn Fn(f64) -> (f64, f64)> = match spec.shape {
        PulseShape::Gaussian { alpha: a } => Box::new(move |w: f64| {
            let x = SQRT_PI / a * (-(w * w) / (4.0 * a * a)).exp();
            (x, -2.0 / a * dawson_unchecked(w / (2.0 * a)))
        }),
        PulseShape::Laplacian { beta } => Box::new(move |w: f64| {
            let d = w * w + beta * beta;
            (2.0 * beta / d, -2.0 * w / d)
        }),
        PulseShape::HermiteGaussian { lambda: l } => Box::new(move |w: f64| {
            let l3 = l * l * l;
            let x = 2.0 / (l * l) - 2.0 * SQRT_2 / l3 * w * dawson_unchecked(w / (SQRT_2 * l));
            let y = -(2.0 * PI).sqrt() / l3 * w * (-(w * w) / (2.0 * l * l)).exp();
            (x, y)
        }),
        other => {
            return Err(Error::Domain(format!("no closed-form spectrum for {}", other.name())))
        }
    };
    let (re, im) = omega.times().into_iter().map(pair).unzip();
    Ok(Spectrum { omega: *omega, re, im })
}

/// `W(ω) = ∫ w(t) e^{-jωt} dt` of a sampled waveform on `omega`.
pub fn numerical_spectrum(w: &SampledWaveform, omega: &Grid) -> Result<Spectrum> {
    w.check_coverage(COVERAGE_TOL, "waveform")?;
    let (re, im) = dtft(w, omega).into_iter().map(|c| (c.re, c.im)).unzip();
    Ok(Spectrum { omega: *omega, re, im })
}

/// |W(ω)| = √(X² + Y²).
pub fn spectral_envelope(sp: &Spectrum) -> SampledWaveform {
    let samples = sp.re.iter().zip(&sp.im).map(|(x, y)| x.hypot(*y)).collect();
    SampledWaveform { grid: sp.omega, samples }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub max_abs: f64,
    pub rms: f64,
}

impl Residual {
    fn of(v: &[f64]) -> Self {
        let max_abs = v.iter().fold(0.0_f64, |m, r| m.max(r.abs()));
        let rms = (v.iter().map(|r| r * r).sum::<f64>() / v.len() as f64).sqrt();
        Self { max_abs, rms }
    }
}

/// Residuals of the Hilbert pair: `H{X} + Y` and `H{Y} - X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KramersKronigReport {
    pub hx_plus_y: Residual,
    pub hy_minus_x: Residual,
    /// max |X|, for relative bounds.
    pub scale: f64,
}

impl KramersKronigReport {
    pub fn relative_rms(&self) -> f64 {
        if self.scale == 0.0 {
            self.hx_plus_y.rms
        } else {
            self.hx_plus_y.rms / self.scale
        }
    }
}

pub fn kramers_kronig_check(sp: &Spectrum) -> KramersKronigReport {
    let hx = hilbert(&sp.real_part());
    let hy = hilbert(&sp.imag_part());
    let r1: Vec<f64> = hx.samples.iter().zip(&sp.im).map(|(h, y)| h + y).collect();
    let r2: Vec<f64> = hy.samples.iter().zip(&sp.re).map(|(h, x)| h - x).collect();
    KramersKronigReport {
        hx_plus_y: Residual::of(&r1),
        hy_minus_x: Residual::of(&r2),
        scale: sp.re.iter().fold(0.0_f64, |m, x| m.max(x.abs())),
    }
}
