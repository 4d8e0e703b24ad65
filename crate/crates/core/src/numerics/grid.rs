use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to decide whether a time falls on a grid sample.
const ALIGN_TOL: f64 = 1e-9;

/// Uniform sampling grid: sample `k` sits at `t0 + k·dt`.
///
/// The same type serves time axes (seconds), lag axes and angular-frequency
/// axes (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub t0: f64,
    pub dt: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(t0: f64, dt: f64, n: usize) -> Result<Self> {
        if !t0.is_finite() {
            return Err(Error::InvalidGrid(format!("t0 must be finite, got {t0}")));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidGrid(format!("dt must be finite and > 0, got {dt}")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {n}")));
        }
        Ok(Self { t0, dt, n })
    }

    /// Odd-length grid `k·dt, k = -m..=m`, with t = 0 as its middle sample.
    pub fn symmetric(m: usize, dt: f64) -> Result<Self> {
        Self::new(-(m as f64) * dt, dt, 2 * m + 1)
    }

    /// Symmetric grid reaching at least `half_width` on each side.
    pub fn centered(half_width: f64, dt: f64) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width must be finite and > 0, got {half_width}"
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidGrid(format!("dt must be finite and > 0, got {dt}")));
        }
        let m = (half_width / dt - ALIGN_TOL).ceil().max(1.0) as usize;
        Self::symmetric(m, dt)
    }

    /// Index offset of t = 0 relative to sample 0, when t0 is an integer
    /// multiple of dt (it may lie outside `0..n`).
    fn origin_offset(&self) -> Option<i64> {
        let r = -self.t0 / self.dt;
        let ri = r.round();
        ((r - ri).abs() <= ALIGN_TOL * ri.abs().max(1.0)).then_some(ri as i64)
    }

    /// Time of sample `k`.
    ///
    /// On grids whose origin is a multiple of `dt` the time is computed from the
    /// signed distance to t = 0, so mirrored samples are exact negatives and the
    /// zero sample is exactly `0.0`.
    pub fn time(&self, k: usize) -> f64 {
        match self.origin_offset() {
            Some(k0) => (k as i64 - k0) as f64 * self.dt,
            None => self.t0 + k as f64 * self.dt,
        }
    }

    pub fn times(&self) -> Vec<f64> {
        match self.origin_offset() {
            Some(k0) => (0..self.n).map(|k| (k as i64 - k0) as f64 * self.dt).collect(),
            None => (0..self.n).map(|k| self.t0 + k as f64 * self.dt).collect(),
        }
    }

    pub fn end(&self) -> f64 {
        self.time(self.n - 1)
    }

    /// Index of the sample at exactly t = 0, if the grid has one.
    pub fn zero_index(&self) -> Option<usize> {
        self.origin_offset()
            .filter(|&k0| k0 >= 0 && (k0 as usize) < self.n)
            .map(|k0| k0 as usize)
    }

    /// Index of the sample at time `t`, if `t` lies on the grid.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let r = (t - self.t0) / self.dt;
        let ri = r.round();
        let aligned = (r - ri).abs() <= ALIGN_TOL * ri.abs().max(1.0);
        (aligned && ri >= 0.0 && (ri as usize) < self.n).then_some(ri as usize)
    }

    /// True when sample `k` and sample `n-1-k` are mirror images about t = 0.
    pub fn is_symmetric(&self) -> bool {
        self.n % 2 == 1 && self.zero_index() == Some(self.n / 2)
    }

    /// Same sampling as `other`, up to floating-point noise.
    pub fn matches(&self, other: &Grid) -> bool {
        self.n == other.n
            && (self.dt - other.dt).abs() <= ALIGN_TOL * self.dt
            && (self.t0 - other.t0).abs() <= ALIGN_TOL * self.dt
    }

    /// Integer sample offset `(other.t0 - self.t0) / dt` when both grids share
    /// a step and their origins differ by a whole number of steps.
    pub fn offset_to(&self, other: &Grid) -> Option<i64> {
        if (self.dt - other.dt).abs() > ALIGN_TOL * self.dt {
            return None;
        }
        integer_ratio(other.t0 - self.t0, self.dt)
    }
}

/// `value / step` as an integer, if it is one up to alignment tolerance.
pub(crate) fn integer_ratio(value: f64, step: f64) -> Option<i64> {
    let r = value / step;
    let ri = r.round();
    ((r - ri).abs() <= ALIGN_TOL * ri.abs().max(1.0)).then_some(ri as i64)
}

/// Real samples on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledWaveform {
    pub grid: Grid,
    pub samples: Vec<f64>,
}

impl SampledWaveform {
    pub fn new(grid: Grid, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.n {
            return Err(Error::GridMismatch(format!(
                "{} samples on a grid of {}",
                samples.len(),
                grid.n
            )));
        }
        if let Some(k) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample at index {k}")));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self { grid, samples: vec![0.0; grid.n] }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let samples = grid.times().into_iter().map(f).collect();
        Self { grid, samples }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.grid.times()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid, samples: self.samples.iter().map(|&v| f(v)).collect() }
    }

    pub fn peak_abs(&self) -> f64 {
        self.samples.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest edge magnitude relative to the peak magnitude (0 for a zero waveform).
    pub fn edge_ratio(&self) -> f64 {
        let peak = self.peak_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let edge = self.samples[0].abs().max(self.samples[self.len() - 1].abs());
        edge / peak
    }

    /// Fails with a coverage error when the waveform has not decayed below
    /// `tol` of its peak at either edge of the grid.
    pub fn check_coverage(&self, tol: f64, what: &str) -> Result<()> {
        let ratio = self.edge_ratio();
        if ratio > tol {
            return Err(Error::Coverage(format!(
                "{what}: edge value is {ratio:.3e} of peak (limit {tol:.0e}); widen the grid"
            )));
        }
        Ok(())
    }

    /// Linear interpolation; zero outside the grid span.
    pub fn interpolate(&self, t: f64) -> f64 {
        let r = (t - self.grid.t0) / self.grid.dt;
        let last = (self.len() - 1) as f64;
        if !(-ALIGN_TOL..=last + ALIGN_TOL).contains(&r) {
            return 0.0;
        }
        let r = r.clamp(0.0, last);
        let k = r.floor() as usize;
        if k + 1 >= self.len() {
            return self.samples[self.len() - 1];
        }
        let frac = r - k as f64;
        self.samples[k] + frac * (self.samples[k + 1] - self.samples[k])
    }
}
