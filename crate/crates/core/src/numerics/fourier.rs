//! Continuous-time Fourier transform approximations.
//!
//! Convention: `W(ω) = ∫ w(t) e^{-jωt} dt`, approximated by `dt · Σ w_k e^{-jω t_k}`.
//! For waveforms that decay at the grid edges this sum is the trapezoidal
//! rule, so closed-form transforms can be compared directly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numerics::grid::{Grid, SampledWaveform};

/// Spectrum sampled on the DFT frequency bins of a time grid, ordered by
/// increasing ω.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSpectrum {
    /// Angular-frequency axis (rad/s); ω = 0 is always a sample.
    pub omega: Grid,
    pub values: Vec<Complex64>,
    /// Grid of the waveform this spectrum came from; `idft` returns to it.
    pub time_grid: Grid,
}

fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = if inverse {
        planner.plan_fft_inverse(buf.len())
    } else {
        planner.plan_fft_forward(buf.len())
    };
    fft.process(buf);
}

pub(crate) fn fft(buf: &mut [Complex64]) {
    fft_in_place(buf, false);
}

/// Unnormalised inverse FFT (`Σ X_k e^{+j2πkm/N}`).
pub(crate) fn ifft(buf: &mut [Complex64]) {
    fft_in_place(buf, true);
}

/// Forward transform on the natural DFT bins, `dω = 2π / (n·dt)`.
pub fn dft(w: &SampledWaveform) -> ComplexSpectrum {
    let n = w.len();
    let dt = w.grid.dt;
    let mut buf: Vec<Complex64> = w.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut buf);

    let half = (n / 2) as i64;
    let d_omega = 2.0 * PI / (n as f64 * dt);
    let omega = Grid { t0: -(half as f64) * d_omega, dt: d_omega, n };
    let t0 = w.grid.time(0);
    let values = (0..n)
        .map(|j| {
            let k = j as i64 - half;
            let bin = k.rem_euclid(n as i64) as usize;
            let om = k as f64 * d_omega;
            buf[bin] * Complex64::from_polar(dt, -om * t0)
        })
        .collect();
    ComplexSpectrum { omega, values, time_grid: w.grid }
}

/// Inverse of [`dft`]; returns the real part on the original time grid.
pub fn idft(sp: &ComplexSpectrum) -> SampledWaveform {
    let n = sp.values.len();
    let dt = sp.time_grid.dt;
    let half = (n / 2) as i64;
    let t0 = sp.time_grid.time(0);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (j, v) in sp.values.iter().enumerate() {
        let k = j as i64 - half;
        let bin = k.rem_euclid(n as i64) as usize;
        let om = k as f64 * sp.omega.dt;
        buf[bin] = v * Complex64::from_polar(1.0, om * t0);
    }
    ifft(&mut buf);
    let scale = 1.0 / (n as f64 * dt);
    SampledWaveform { grid: sp.time_grid, samples: buf.iter().map(|c| c.re * scale).collect() }
}

/// Chirp-z evaluation of `out_k = Σ_m in_m · exp(sign·j·(x0 + m·dx)(y0 + k·dy))`
/// for `k = 0..m_out`, in O((N + M) log(N + M)).
pub(crate) fn chirp_z(
    input: &[Complex64],
    x0: f64,
    dx: f64,
    y0: f64,
    dy: f64,
    m_out: usize,
    sign: f64,
) -> Vec<Complex64> {
    let n_in = input.len();
    if n_in == 0 || m_out == 0 {
        return vec![Complex64::new(0.0, 0.0); m_out];
    }
    // (x0 + m dx)(y0 + k dy) = x0 y0 + x0 dy k + y0 dx m + dx dy k m, and
    // k m = (k² + m² - (k - m)²) / 2.
    let theta = dx * dy;
    let chirp = |q: f64| Complex64::from_polar(1.0, sign * 0.5 * theta * q * q);

    let len = (n_in + m_out - 1).next_power_of_two();
    let mut a = vec![Complex64::new(0.0, 0.0); len];
    for (m, v) in input.iter().enumerate() {
        let mf = m as f64;
        a[m] = v * Complex64::from_polar(1.0, sign * y0 * dx * mf) * chirp(mf);
    }
    let mut b = vec![Complex64::new(0.0, 0.0); len];
    for l in 0..m_out {
        b[l] = chirp(l as f64).conj();
    }
    for l in 1..n_in {
        b[len - l] = chirp(l as f64).conj();
    }
    fft(&mut a);
    fft(&mut b);
    for (ai, bi) in a.iter_mut().zip(&b) {
        *ai *= bi;
    }
    ifft(&mut a);
    let norm = 1.0 / len as f64;
    (0..m_out)
        .map(|k| {
            let kf = k as f64;
            let outer = Complex64::from_polar(1.0, sign * (x0 * y0 + x0 * dy * kf));
            a[k] * norm * chirp(kf) * outer
        })
        .collect()
}

/// Continuous-time transform of `w` evaluated on an arbitrary uniform ω grid.
pub fn dtft(w: &SampledWaveform, omega: &Grid) -> Vec<Complex64> {
    let input: Vec<Complex64> = w.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let dt = w.grid.dt;
    chirp_z(&input, w.grid.time(0), dt, omega.time(0), omega.dt, omega.n, -1.0)
        .into_iter()
        .map(|c| c * dt)
        .collect()
}

/// `(1/2π) ∫ W(ω) e^{jωt} dω` on the requested time grid, by the rectangle
/// (equivalently trapezoid, for decaying W) rule over `omega`.
pub fn inverse_dtft(values: &[Complex64], omega: &Grid, times: &Grid) -> Result<Vec<Complex64>> {
    if values.len() != omega.n {
        return Err(Error::GridMismatch(format!(
            "{} spectral values on an ω grid of {}",
            values.len(),
            omega.n
        )));
    }
    let scale = omega.dt / (2.0 * PI);
    Ok(chirp_z(values, omega.time(0), omega.dt, times.time(0), times.dt, times.n, 1.0)
        .into_iter()
        .map(|c| c * scale)
        .collect())
}
