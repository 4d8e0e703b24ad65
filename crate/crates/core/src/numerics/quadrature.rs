use crate::error::{Error, Result};
use crate::numerics::grid::SampledWaveform;

/// Trapezoidal integral of a sampled waveform over its whole grid.
pub fn trapz(w: &SampledWaveform) -> f64 {
    // A SampledWaveform always has at least two samples.
    trapz_unchecked(&w.samples, w.grid.dt)
}

/// Trapezoidal integral of uniformly spaced samples.
pub fn trapz_samples(samples: &[f64], dt: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidGrid(format!(
            "trapezoidal rule needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    Ok(trapz_unchecked(samples, dt))
}

pub(crate) fn trapz_unchecked(samples: &[f64], dt: f64) -> f64 {
    match samples {
        [] | [_] => 0.0,
        [first, .., last] => dt * (samples.iter().sum::<f64>() - 0.5 * (first + last)),
    }
}
