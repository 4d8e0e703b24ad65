//! Complex envelope `z = x + jy`, RF synthesis and envelope/phase recovery.
//!
//! The bandpass convention is fixed to `s(t) = x(t)cos(ω0 t) + y(t)sin(ω0 t)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::grid::{Grid, SampledWaveform};

/// Envelope magnitude, relative to peak, below which the phase is undefined.
pub const PHASE_MASK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexEnvelope {
    pub grid: Grid,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl ComplexEnvelope {
    pub fn new(grid: Grid, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != grid.n || y.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "x has {}, y has {} samples on a grid of {}",
                x.len(),
                y.len(),
                grid.n
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::Domain("complex envelope has non-finite samples".into()));
        }
        Ok(Self { grid, x, y })
    }

    pub fn from_parts(x: &SampledWaveform, y: &SampledWaveform) -> Result<Self> {
        if !x.grid.matches(&y.grid) {
            return Err(Error::GridMismatch("x and y must share a grid".into()));
        }
        Self::new(x.grid, x.samples.clone(), y.samples.clone())
    }

    pub fn in_phase(&self) -> SampledWaveform {
        SampledWaveform { grid: self.grid, samples: self.x.clone() }
    }

    pub fn quadrature(&self) -> SampledWaveform {
        SampledWaveform { grid: self.grid, samples: self.y.clone() }
    }

    /// z*(t): negated quadrature.
    pub fn conj(&self) -> Self {
        Self { grid: self.grid, x: self.x.clone(), y: self.y.iter().map(|v| -v).collect() }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfSignal {
    pub grid: Grid,
    pub samples: Vec<f64>,
    /// Carrier frequency in Hz.
    pub f0: f64,
    /// Set when the envelope's −60 dB bandwidth is not at least 8× below f0.
    pub band_warning: bool,
}

impl RfSignal {
    pub fn waveform(&self) -> SampledWaveform {
        SampledWaveform { grid: self.grid, samples: self.samples.clone() }
    }
}

/// One-sided bandwidth (Hz) containing everything within 60 dB of the
/// spectral peak of `z`, from a zero-padded FFT.
pub fn bandwidth_60db(z: &ComplexEnvelope) -> f64 {
    use num_complex::Complex64;
    let n = z.len();
    let len = (4 * n).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (k, (x, y)) in z.x.iter().zip(&z.y).enumerate() {
        buf[k] = Complex64::new(*x, *y);
    }
    crate::numerics::fourier::fft(&mut buf);
    let mags: Vec<f64> = buf.iter().map(|c| c.norm()).collect();
    let peak = mags.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return 0.0;
    }
    let floor = peak * 1e-3;
    let df = 1.0 / (len as f64 * z.grid.dt);
    mags.iter()
        .enumerate()
        .filter(|(_, &m)| m >= floor)
        .map(|(k, _)| {
            let signed = if k <= len / 2 { k as f64 } else { k as f64 - len as f64 };
            signed.abs() * df
        })
        .fold(0.0, f64::max)
}

/// `s(t) = x(t)cos(ω0 t) + y(t)sin(ω0 t)` on `rf_grid`, with x and y
/// linearly interpolated (zero outside the envelope grid).
pub fn synthesize_rf(z: &ComplexEnvelope, f0: f64, rf_grid: &Grid) -> Result<RfSignal> {
    if !(f0.is_finite() && f0 > 0.0) {
        return Err(Error::InvalidSpec(format!("carrier frequency must be > 0, got {f0}")));
    }
    let omega0 = 2.0 * PI * f0;
    // dt = 1/(16·f0) sits exactly on the limit and is accepted.
    if omega0 * rf_grid.dt > PI / 8.0 * (1.0 + 1e-12) {
        return Err(Error::Sampling(format!(
            "ω0·dt = {:.4} ≥ π/8; use rf_dt ≤ 1/(16·f0) = {:.4e}",
            omega0 * rf_grid.dt,
            1.0 / (16.0 * f0)
        )));
    }
    let (xi, yi) = (z.in_phase(), z.quadrature());
    let samples = rf_grid
        .times()
        .into_iter()
        .map(|t| {
            let (s, c) = (omega0 * t).sin_cos();
            xi.interpolate(t) * c + yi.interpolate(t) * s
        })
        .collect();
    Ok(RfSignal { grid: *rf_grid, samples, f0, band_warning: 8.0 * bandwidth_60db(z) > f0 })
}

/// μ(t) = √(x² + y²).
pub fn natural_envelope(z: &ComplexEnvelope) -> SampledWaveform {
    let samples = z.x.iter().zip(&z.y).map(|(x, y)| x.hypot(*y)).collect();
    SampledWaveform { grid: z.grid, samples }
}

/// Phase with a mask marking samples where the envelope is too small for
/// the phase to mean anything; masked samples hold 0.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrace {
    pub psi: SampledWaveform,
    pub masked: Vec<bool>,
}

impl PhaseTrace {
    pub fn any_masked(&self) -> bool {
        self.masked.iter().any(|&m| m)
    }
}

/// ψ(t) = atan2(y, x), masked where μ < 1e-12·max μ.
pub fn phase_function(z: &ComplexEnvelope) -> PhaseTrace {
    let mu = natural_envelope(z);
    let floor = PHASE_MASK_TOL * mu.peak_abs();
    let (samples, masked) = z
        .x
        .iter()
        .zip(&z.y)
        .zip(&mu.samples)
        .map(|((x, y), m)| if *m <= floor { (0.0, true) } else { (y.atan2(*x), false) })
        .unzip();
    PhaseTrace { psi: SampledWaveform { grid: z.grid, samples }, masked }
}

/// Rows `(t, x, y)` traced by the tip of the phasor.
pub fn phasor_trajectory(z: &ComplexEnvelope) -> Vec<(f64, f64, f64)> {
    z.grid.times().into_iter().zip(z.x.iter().zip(&z.y)).map(|(t, (x, y))| (t, *x, *y)).collect()
}
