//! Compression gain and the length-2 Golay pair.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::correlation::{complex_autocorrelation, correlate, CorrelationResult};
use crate::error::Result;
use crate::numerics::grid::{Grid, SampledWaveform};
use crate::numerics::roots::find_half_height_width;
use crate::pulses::{envelope, quadrature_components, PulseShape, PulseSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainReport {
    pub shape: String,
    pub params: BTreeMap<String, f64>,
    /// FWHH of the autocorrelation of the unmodulated pulse.
    #[serde(rename = "T_O")]
    pub t_o: f64,
    /// FWHH of R_Σ.
    #[serde(rename = "T_C")]
    pub t_c: f64,
    #[serde(rename = "G_C")]
    pub g_c: f64,
}

/// Full-support lag grid at the sample step.
fn full_lags(grid: &Grid) -> Result<Grid> {
    Grid::symmetric(grid.n - 1, grid.dt)
}

/// `G_C = T_O / T_C`, with `T_O` the half-height width of the autocorrelation
/// of the pulse shape and `T_C` that of `R_Σ` of its quadrature pair.
pub fn compression_gain(spec: &PulseSpec, grid: &Grid) -> Result<GainReport> {
    let lags = full_lags(grid)?;
    let s = envelope(spec, grid)?;
    let r_o = SampledWaveform { grid: lags, samples: correlate(&s, &s, &lags)? };
    let z = quadrature_components(spec, grid)?;
    let r_c = SampledWaveform { grid: lags, samples: complex_autocorrelation(&z, &lags)?.rsum };
    let t_o = find_half_height_width(&r_o)?.width;
    let t_c = find_half_height_width(&r_c)?.width;
    Ok(GainReport {
        shape: spec.shape.name().to_string(),
        params: spec.shape.params(),
        t_o,
        t_c,
        g_c: t_o / t_c,
    })
}

/// `c_l = Σ_k a_k a_{k+l}` for `l = -(n-1)..=n-1`.
pub fn aperiodic_autocorrelation(seq: &[i64]) -> Vec<i64> {
    let n = seq.len() as i64;
    (-(n - 1)..n)
        .map(|l| {
            (0..n)
                .filter(|k| (0..n).contains(&(k + l)))
                .map(|k| seq[k as usize] * seq[(k + l) as usize])
                .sum()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GolayDemo {
    pub first: Vec<i64>,
    pub second: Vec<i64>,
    pub first_acf: Vec<i64>,
    pub second_acf: Vec<i64>,
    pub sum: Vec<i64>,
    /// Correlations of the rectangular pulse and its binary replica.
    pub continuous: CorrelationResult,
}

/// The pair (+1,+1), (−1,+1) with κ = 1 and dt = 1e-3 for the continuous part.
pub fn golay_demo() -> Result<GolayDemo> {
    golay_demo_with(1.0, 1e-3)
}

pub fn golay_demo_with(kappa: f64, dt: f64) -> Result<GolayDemo> {
    let first = vec![1, 1];
    let second = vec![-1, 1];
    let first_acf = aperiodic_autocorrelation(&first);
    let second_acf = aperiodic_autocorrelation(&second);
    let sum = first_acf.iter().zip(&second_acf).map(|(a, b)| a + b).collect();

    let spec = PulseSpec::hard(PulseShape::Rect { kappa });
    let grid = spec.default_grid(dt)?;
    let z = quadrature_components(&spec, &grid)?;
    let lags = full_lags(&grid)?;
    let continuous = complex_autocorrelation(&z, &lags)?;
    Ok(GolayDemo { first, second, first_acf, second_acf, sum, continuous })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::triangle;
    use crate::pulses::PhaseModel;

    fn gain(shape: PulseShape, dt: f64) -> f64 {
        let spec = PulseSpec::hard(shape);
        compression_gain(&spec, &spec.default_grid(dt).unwrap()).unwrap().g_c
    }

    #[test]
    fn laplacian_and_gaussian() {
        let g = gain(PulseShape::Laplacian { beta: 1.0 }, 2e-3);
        assert!((g - 2.42).abs() < 0.02, "{g}");
        let g = gain(PulseShape::Gaussian { alpha: 1.0 }, 2e-3);
        assert!((g - 2.1).abs() < 0.05, "{g}");
    }

    /// Oracle: T_O solves (1+u)e^{-u} = 1/2 and T_C solves e^{-u} = 1/2.
    #[test]
    fn laplacian_widths_match_roots() {
        let spec = PulseSpec::hard(PulseShape::Laplacian { beta: 1.0 });
        let r = compression_gain(&spec, &spec.default_grid(1e-3).unwrap()).unwrap();
        assert!((r.t_o - 2.0 * 1.678_346_990_016_660_7).abs() < 1e-3, "{}", r.t_o);
        // R_Σ(0) is one x(0)²·dt sample short, lowering the half-height by dt/2
        // and widening T_C by about dt.
        assert!((r.t_c - 2.0 * 2f64.ln() - 1e-3).abs() < 1e-4, "{}", r.t_c);
    }

    #[test]
    fn rect_is_two() {
        let g = gain(PulseShape::Rect { kappa: 1.0 }, 2e-3);
        assert!((g - 2.0).abs() < 0.005, "{g}");
    }

    #[test]
    fn soft_rect_near_two() {
        for gamma in [std::f64::consts::PI, 3.0 * std::f64::consts::PI] {
            let g = gain(PulseShape::SoftRect { gamma, kappa: 1.0 }, 2e-3);
            assert!((g - 2.0).abs() < 0.05, "γ = {gamma}: {g}");
        }
    }

    #[test]
    fn scale_invariance() {
        let g1 = gain(PulseShape::Laplacian { beta: 1.0 }, 2e-3);
        let g2 = gain(PulseShape::Laplacian { beta: 2.5 }, 2e-3 / 2.5);
        assert!((g1 / g2 - 1.0).abs() < 1e-3);
        let g3 = gain(PulseShape::Laplacian { beta: 0.4 }, 2e-3 / 0.4);
        assert!((g1 / g3 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn refinement_converges() {
        let shape = PulseShape::Gaussian { alpha: 1.0 };
        let g: Vec<f64> = [8e-3, 4e-3, 2e-3, 1e-3].iter().map(|&dt| gain(shape, dt)).collect();
        let steps: Vec<f64> = g.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
        for s in steps.windows(2) {
            assert!(s[1] < s[0], "{g:?}");
        }
    }

    #[test]
    fn sigmoid_phase_uses_natural_pulse_for_t_o() {
        let hard = PulseSpec::hard(PulseShape::Gaussian { alpha: 1.0 });
        let soft = PulseSpec::new(hard.shape, PhaseModel::TanhSigmoid { gamma: 50.0 });
        let grid = hard.default_grid(2e-3).unwrap();
        let a = compression_gain(&hard, &grid).unwrap();
        let b = compression_gain(&soft, &grid).unwrap();
        assert_eq!(a.t_o, b.t_o);
        assert!((a.t_c - b.t_c).abs() < 0.05);
    }

    #[test]
    fn report_json_fields() {
        let spec = PulseSpec::hard(PulseShape::Rect { kappa: 1.0 });
        let r = compression_gain(&spec, &spec.default_grid(1e-2).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in ["shape", "params", "T_O", "T_C", "G_C"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["params"]["kappa"], 1.0);
    }

    #[test]
    fn golay_pair() {
        let d = golay_demo_with(1.0, 1e-2).unwrap();
        assert_eq!(d.first_acf, vec![1, 2, 1]);
        assert_eq!(d.second_acf, vec![-1, 2, -1]);
        assert_eq!(d.sum, vec![0, 4, 0]);
        let c = &d.continuous;
        let k0 = c.lags.zero_index().unwrap();
        for (t, v) in c.lags.times().iter().zip(&c.rsum) {
            if (t.abs() - 1.0).abs() < 1e-9 {
                // The signum jump meets the edge jump: one sample of weight dt.
                assert!(v.abs() <= 1e-2 + 1e-12, "τ {t}: {v}");
            } else if t.abs() > 1.0 {
                assert!(v.abs() < 1e-12, "τ {t}: {v}");
            } else if *t != 0.0 {
                assert!((v - 4.0 * triangle(*t, 1.0)).abs() < 1e-12);
            }
        }
        assert!((c.rsum[k0] - (4.0 - 2.0 * 1e-2)).abs() < 1e-12);
    }

    #[test]
    fn aperiodic_longer_sequences() {
        assert_eq!(aperiodic_autocorrelation(&[1, 1, 1, -1]), vec![-1, 0, 1, 4, 1, 0, -1]);
        assert_eq!(aperiodic_autocorrelation(&[1, 1, -1, 1]), vec![1, 0, -1, 4, -1, 0, 1]);
        assert!(aperiodic_autocorrelation(&[]).is_empty());
    }
}
