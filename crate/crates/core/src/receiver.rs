//! Quadrature receiver: mixing with an unknown carrier phase, low-pass
//! filtering, a bank of two matched filters and the phase-invariant processor.
//!
//! Matched-filter outputs follow `R_fg(τ) = ∫ f(t) g(t+τ) dt` with the
//! received component first, e.g. `a(τ) = ∫ u(t) x(t+τ) dt`. A pulse that
//! arrives `D` late therefore peaks at lag `τ = -D`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::correlation::correlate;
use crate::envelope::{ComplexEnvelope, RfSignal};
use crate::error::{Error, Result};
use crate::numerics::grid::{integer_ratio, Grid, SampledWaveform};
use crate::pulses::{quadrature_components, PhaseModel, PulseShape, PulseSpec};

/// RF samples per carrier period in the default chain.
pub const RF_SAMPLES_PER_CYCLE: f64 = 16.0;
/// Carrier cycles per characteristic pulse width in the default chain.
pub const CYCLES_PER_WIDTH: f64 = 32.0;
/// RF-to-envelope decimation factor.
pub const DECIMATION: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChannelSpec {
    /// Carrier phase offset between transmitter and receiver (rad).
    pub phi: f64,
    /// Propagation delay (s); a non-negative multiple of the RF sample step.
    pub delay: f64,
    pub amplitude: f64,
    /// Standard deviation of white Gaussian noise added per RF sample.
    pub noise_sigma: f64,
    pub seed: u64,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self { phi: 0.0, delay: 0.0, amplitude: 1.0, noise_sigma: 0.0, seed: 0 }
    }
}

impl ChannelSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.phi.is_finite() {
            return Err(Error::InvalidSpec(format!("phi must be finite, got {}", self.phi)));
        }
        if !(self.delay >= 0.0 && self.delay.is_finite()) {
            return Err(Error::InvalidSpec(format!("delay must be ≥ 0, got {}", self.delay)));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::InvalidSpec(format!("amplitude must be > 0, got {}", self.amplitude)));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::InvalidSpec(format!("noise_sigma must be ≥ 0, got {}", self.noise_sigma)));
        }
        Ok(())
    }
}

/// Linear-phase Hamming-windowed sinc low-pass filter with unity DC gain.
#[derive(Debug, Clone, PartialEq)]
pub struct LowPassFir {
    taps: Vec<f64>,
}

impl LowPassFir {
    /// `cutoff` as a fraction of the sample rate; `len` is forced odd.
    pub fn new(cutoff: f64, len: usize) -> Result<Self> {
        if !(cutoff > 0.0 && cutoff < 0.5) {
            return Err(Error::InvalidSpec(format!("cutoff must lie in (0, 0.5), got {cutoff}")));
        }
        let len = len.max(3) | 1;
        let m = (len / 2) as f64;
        let mut taps: Vec<f64> = (0..len)
            .map(|k| {
                let n = k as f64 - m;
                let sinc = if n == 0.0 { 2.0 * cutoff } else { (2.0 * PI * cutoff * n).sin() / (PI * n) };
                let w = 0.54 - 0.46 * (2.0 * PI * k as f64 / (len - 1) as f64).cos();
                sinc * w
            })
            .collect();
        let sum: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= sum);
        Ok(Self { taps })
    }

    /// The receiver filter: cutoff f0/2, `8·(fs/f0) + 1` taps.
    pub fn for_carrier(f0: f64, dt: f64) -> Result<Self> {
        let per_cycle = 1.0 / (f0 * dt);
        Self::new(0.5 * f0 * dt, (8.0 * per_cycle).round() as usize + 1)
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn half_len(&self) -> usize {
        self.taps.len() / 2
    }

    /// Centred output at sample `k` (group delay removed), zero padding at the ends.
    pub fn output_at(&self, input: &[f64], k: usize) -> f64 {
        let m = self.half_len() as i64;
        let n = input.len() as i64;
        self.taps
            .iter()
            .enumerate()
            .map(|(j, h)| {
                let idx = k as i64 + m - j as i64;
                if (0..n).contains(&idx) {
                    h * input[idx as usize]
                } else {
                    0.0
                }
            })
            .sum()
    }

    pub fn apply(&self, input: &[f64]) -> Vec<f64> {
        (0..input.len()).map(|k| self.output_at(input, k)).collect()
    }
}

/// Every `factor`-th sample of `grid`, keeping t = 0 when the grid has it.
pub fn decimated_grid(grid: &Grid, factor: usize) -> Result<(Grid, usize)> {
    let start = grid.zero_index().map_or(0, |k0| k0 % factor);
    if grid.n <= start + factor {
        return Err(Error::InvalidGrid("grid too short to decimate".into()));
    }
    let n = (grid.n - start - 1) / factor + 1;
    Ok((Grid::new(grid.time(start), grid.dt * factor as f64, n)?, start))
}

/// `u = LPF{r·2cos(ω0t+φ)}`, `v = LPF{r·2sin(ω0t+φ)}`, decimated by [`DECIMATION`].
pub fn demodulate(r: &RfSignal, f0: f64, phi: f64) -> Result<ComplexEnvelope> {
    demodulate_with(r, f0, phi, DECIMATION)
}

pub fn demodulate_with(r: &RfSignal, f0: f64, phi: f64, factor: usize) -> Result<ComplexEnvelope> {
    if !(f0 > 0.0 && f0.is_finite()) {
        return Err(Error::InvalidSpec(format!("carrier frequency must be > 0, got {f0}")));
    }
    if (f0 - r.f0).abs() > 1e-9 * f0 {
        return Err(Error::Sampling(format!("signal carrier {} Hz, receiver tuned to {f0} Hz", r.f0)));
    }
    let omega0 = 2.0 * PI * f0;
    if omega0 * r.grid.dt > PI / 8.0 * (1.0 + 1e-12) {
        return Err(Error::Sampling(format!(
            "RF step {} too coarse for a {f0} Hz carrier (need ≤ {})",
            r.grid.dt,
            1.0 / (16.0 * f0)
        )));
    }
    if factor == 0 {
        return Err(Error::InvalidSpec("decimation factor must be ≥ 1".into()));
    }
    let lpf = LowPassFir::for_carrier(f0, r.grid.dt)?;
    let times = r.grid.times();
    let (mixed_i, mixed_q): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(&r.samples)
        .map(|(t, s)| {
            let (sn, cs) = (omega0 * t + phi).sin_cos();
            (2.0 * s * cs, 2.0 * s * sn)
        })
        .unzip();
    let (grid, start) = decimated_grid(&r.grid, factor)?;
    let picks = (0..grid.n).map(|i| start + i * factor);
    let (u, v) = picks.map(|k| (lpf.output_at(&mixed_i, k), lpf.output_at(&mixed_q, k))).unzip();
    ComplexEnvelope::new(grid, u, v)
}

/// Samples of `grid` farther than `span` from both grid ends and from every
/// time in `breaks`; elsewhere the filter's transient response dominates.
pub fn settled_mask(grid: &Grid, span: f64, breaks: &[f64]) -> Vec<bool> {
    let (lo, hi) = (grid.time(0), grid.end());
    grid.times()
        .into_iter()
        .map(|t| t - lo > span && hi - t > span && breaks.iter().all(|b| (t - b).abs() > span))
        .collect()
}

/// Times at which x or y of the pulse jumps.
pub fn discontinuities(spec: &PulseSpec) -> Vec<f64> {
    let mut out = Vec::new();
    if spec.phase == PhaseModel::HardSignum && spec.shape.value(0.0) != 0.0 {
        out.push(0.0);
    }
    match spec.shape {
        PulseShape::Rect { kappa } => out.extend([-kappa, kappa]),
        PulseShape::SoftRect { gamma, kappa } if gamma.is_infinite() => out.extend([-kappa, kappa]),
        _ => {}
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReceiverTrace {
    pub lags: Grid,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: Vec<f64>,
    pub processor_out: Vec<f64>,
}

/// a = MFX(u), b = MFY(u), c = MFX(v), d = MFY(v), then the processor.
pub fn matched_filter_bank(
    u: &SampledWaveform,
    v: &SampledWaveform,
    templates: &ComplexEnvelope,
    lags: &Grid,
) -> Result<ReceiverTrace> {
    let (x, y) = (templates.in_phase(), templates.quadrature());
    let a = correlate(u, &x, lags)?;
    let b = correlate(u, &y, lags)?;
    let c = correlate(v, &x, lags)?;
    let d = correlate(v, &y, lags)?;
    let mut tr = ReceiverTrace { lags: *lags, a, b, c, d, processor_out: Vec::new() };
    tr.processor_out = phase_invariant_processor(&tr);
    Ok(tr)
}

/// `(a+d)² − (a−d)² − (b+c)² + (b−c)²`, i.e. `4(ad − bc)`.
pub fn phase_invariant_processor(tr: &ReceiverTrace) -> Vec<f64> {
    (0..tr.a.len())
        .map(|k| {
            let (a, b, c, d) = (tr.a[k], tr.b[k], tr.c[k], tr.d[k]);
            (a + d).powi(2) - (a - d).powi(2) - (b + c).powi(2) + (b - c).powi(2)
        })
        .collect()
}

/// `a² + b² + c² + d²`.
pub fn sum_of_squares_invariant(tr: &ReceiverTrace) -> Vec<f64> {
    (0..tr.a.len())
        .map(|k| tr.a[k].powi(2) + tr.b[k].powi(2) + tr.c[k].powi(2) + tr.d[k].powi(2))
        .collect()
}

/// Sampling plan of a receiver run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainGrids {
    pub f0: f64,
    pub rf: Grid,
    pub envelope: Grid,
    pub lags: Grid,
}

impl ChainGrids {
    /// Default plan: `f0 = 32/width` unless given, `rf_dt = 1/(16 f0)` unless
    /// given, envelope step `4·rf_dt`, grids covering the pulse plus `delay`.
    pub fn plan(spec: &PulseSpec, delay: f64, f0: Option<f64>, rf_dt: Option<f64>) -> Result<Self> {
        spec.validate()?;
        let f0 = f0.unwrap_or(CYCLES_PER_WIDTH / spec.shape.characteristic_width());
        if !(f0 > 0.0 && f0.is_finite()) {
            return Err(Error::InvalidSpec(format!("carrier frequency must be > 0, got {f0}")));
        }
        let rf_dt = rf_dt.unwrap_or(1.0 / (RF_SAMPLES_PER_CYCLE * f0));
        if !(rf_dt > 0.0 && rf_dt.is_finite()) {
            return Err(Error::InvalidGrid(format!("rf_dt must be > 0, got {rf_dt}")));
        }
        let hw = spec.shape.default_half_width();
        let env_dt = rf_dt * DECIMATION as f64;
        let m_env = (hw / env_dt).ceil() as usize;
        let m_left = m_env * DECIMATION;
        let m_right = ((hw + delay) / env_dt).ceil() as usize * DECIMATION;
        let rf = Grid::new(-(m_left as f64) * rf_dt, rf_dt, m_left + m_right + 1)?;
        let envelope = Grid::symmetric(m_env, env_dt)?;
        let m_lag = ((hw + delay) / env_dt).ceil() as usize;
        let lags = Grid::symmetric(m_lag, env_dt)?;
        Ok(Self { f0, rf, envelope, lags })
    }
}

/// Result of [`run_chain`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChainRun {
    pub trace: ReceiverTrace,
    pub grids: ChainGrids,
    /// Delay read off the processor peak (`-argmax τ`).
    pub estimated_delay: f64,
    pub band_warning: bool,
}

impl ChainRun {
    pub fn sum_of_squares(&self) -> Vec<f64> {
        sum_of_squares_invariant(&self.trace)
    }
}

/// Transmitted RF pulse delayed by `delay`, evaluated directly at the RF rate.
pub fn transmit(spec: &PulseSpec, grids: &ChainGrids, channel: &ChannelSpec) -> Result<RfSignal> {
    let rf = grids.rf;
    if integer_ratio(channel.delay, rf.dt).is_none() {
        return Err(Error::GridAlignment(format!(
            "delay {} is not a multiple of the RF step {}",
            channel.delay, rf.dt
        )));
    }
    let shifted = Grid { t0: rf.t0 - channel.delay, ..rf };
    let z = quadrature_components(spec, &shifted)?;
    let omega0 = 2.0 * PI * grids.f0;
    let samples = shifted
        .times()
        .iter()
        .zip(z.x.iter().zip(&z.y))
        .map(|(t, (x, y))| {
            let (s, c) = (omega0 * t).sin_cos();
            channel.amplitude * (x * c + y * s)
        })
        .collect();
    let band_warning = 8.0 * crate::envelope::bandwidth_60db(&z) > grids.f0;
    Ok(RfSignal { grid: rf, samples, f0: grids.f0, band_warning })
}

/// Adds seeded white Gaussian noise; stream `run_index` of the ChaCha20
/// generator seeded with `seed`.
pub fn add_noise(r: &mut RfSignal, sigma: f64, seed: u64, run_index: u64) -> Result<()> {
    if sigma == 0.0 {
        return Ok(());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::InvalidSpec(e.to_string()))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(run_index);
    r.samples.iter_mut().for_each(|s| *s += normal.sample(&mut rng));
    Ok(())
}

pub fn run_chain(spec: &PulseSpec, channel: &ChannelSpec, f0: Option<f64>) -> Result<ChainRun> {
    run_chain_indexed(spec, channel, f0, None, 0)
}

/// Full chain with an explicit RF step and RNG stream index.
pub fn run_chain_indexed(
    spec: &PulseSpec,
    channel: &ChannelSpec,
    f0: Option<f64>,
    rf_dt: Option<f64>,
    run_index: u64,
) -> Result<ChainRun> {
    channel.validate()?;
    let grids = ChainGrids::plan(spec, channel.delay, f0, rf_dt)?;
    let mut r = transmit(spec, &grids, channel)?;
    add_noise(&mut r, channel.noise_sigma, channel.seed, run_index)?;
    let uv = demodulate(&r, grids.f0, channel.phi)?;
    let templates = quadrature_components(spec, &uv.grid)?;
    let trace = matched_filter_bank(&uv.in_phase(), &uv.quadrature(), &templates, &grids.lags)?;
    let k = trace
        .processor_out
        .iter()
        .enumerate()
        .fold(0, |best, (k, v)| if *v > trace.processor_out[best] { k } else { best });
    let estimated_delay = -grids.lags.time(k);
    Ok(ChainRun { trace, grids, estimated_delay, band_warning: r.band_warning })
}

/// Everything needed to reproduce a receiver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: u32,
    pub pulse: PulseSpec,
    pub channel: ChannelSpec,
    pub f0: f64,
    pub rf_grid: Grid,
    pub envelope_grid: Grid,
    pub lag_grid: Grid,
    pub seed: u64,
    pub run_index: u64,
    pub estimated_delay: f64,
}

impl RunManifest {
    pub fn new(spec: &PulseSpec, channel: &ChannelSpec, run: &ChainRun, run_index: u64) -> Self {
        Self {
            schema: 1,
            pulse: *spec,
            channel: *channel,
            f0: run.grids.f0,
            rf_grid: run.grids.rf,
            envelope_grid: run.grids.envelope,
            lag_grid: run.grids.lags,
            seed: channel.seed,
            run_index,
            estimated_delay: run.estimated_delay,
        }
    }
}
