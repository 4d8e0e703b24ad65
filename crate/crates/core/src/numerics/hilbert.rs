use num_complex::Complex64;

use crate::numerics::fourier::{fft, ifft};
use crate::numerics::grid::SampledWaveform;

/// Zero-padding factor; pushes the periodic-kernel error well below 1e-4 for
/// inputs that have decayed at the grid edges.
const PAD_FACTOR: usize = 16;

/// Hilbert transform `(1/π) p.v.∫ f(s)/(t - s) ds` of a sampled function,
/// computed by multiplying its discrete transform by `-j·sgn(ν)`.
///
/// The input must decay toward the grid edges: it is zero-padded before the
/// transform, so a truncated input produces edge artefacts. The transform
/// itself decays only as 1/t, which is why the padding is generous.
pub fn hilbert(f: &SampledWaveform) -> SampledWaveform {
    let n = f.len();
    let len = (PAD_FACTOR * n).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); len];
    for (b, &v) in buf.iter_mut().zip(&f.samples) {
        *b = Complex64::new(v, 0.0);
    }
    fft(&mut buf);
    let half = len / 2;
    buf[0] = Complex64::new(0.0, 0.0);
    buf[half] = Complex64::new(0.0, 0.0);
    for (k, b) in buf.iter_mut().enumerate().skip(1) {
        if k < half {
            *b *= Complex64::new(0.0, -1.0);
        } else if k > half {
            *b *= Complex64::new(0.0, 1.0);
        }
    }
    ifft(&mut buf);
    let norm = 1.0 / len as f64;
    SampledWaveform { grid: f.grid, samples: buf[..n].iter().map(|c| c.re * norm).collect() }
}
