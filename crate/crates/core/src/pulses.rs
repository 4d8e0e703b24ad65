//! Pulse families and the minimal-compression construction.
//!
//! A symmetric pulse `x(t)` is paired with its antisymmetric replica
//! `y(t) = x(t)·sgn(t)`; their sum `w = x + y = 2H(t)x(t)` is causal. Signum
//! constructions need `t = 0` on the grid so that `sgn(0) = 0` and
//! `w(0) = x(0)` are honoured sample-exactly.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::envelope::ComplexEnvelope;
use crate::error::{Error, Result};
use crate::numerics::grid::{Grid, SampledWaveform};

/// Edge magnitude, relative to peak, above which a grid counts as truncating.
pub const COVERAGE_TOL: f64 = 1e-6;

/// Envelope family with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PulseShape {
    /// `exp(-β|t|)`
    Laplacian { beta: f64 },
    /// `exp(-α²t²)`
    Gaussian { alpha: f64 },
    /// `{tanh[γ(t+κ)] - tanh[γ(t-κ)]}/2`; γ = ∞ gives the hard rectangle.
    SoftRect { gamma: f64, kappa: f64 },
    /// `[sgn(t+κ) - sgn(t-κ)]/2`
    Rect { kappa: f64 },
    /// Bimodal `|t|·exp(-λ²t²/2)`, built from the antisymmetric `t·exp(-λ²t²/2)`.
    HermiteGaussian { lambda: f64 },
}

/// Model of the phase modulating function ψ(t).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PhaseModel {
    /// ψ(t) = (π/4)·sgn(t): exact minimal compression.
    #[default]
    HardSignum,
    /// ψ(t) = (π/4)·tanh(γt): physically realisable phase transition.
    TanhSigmoid { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    #[serde(flatten)]
    pub shape: PulseShape,
    #[serde(default)]
    pub phase: PhaseModel,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && !v.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be > 0, got {v}")))
    }
}

fn positive_finite(name: &str, v: f64) -> Result<()> {
    positive(name, v)?;
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{name} must be finite, got {v}")))
    }
}

/// Signum with sgn(0) = 0.
pub fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl PulseShape {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PulseShape::Laplacian { beta } => positive_finite("beta", beta),
            PulseShape::Gaussian { alpha } => positive_finite("alpha", alpha),
            PulseShape::SoftRect { gamma, kappa } => {
                positive("gamma", gamma)?;
                positive_finite("kappa", kappa)
            }
            PulseShape::Rect { kappa } => positive_finite("kappa", kappa),
            PulseShape::HermiteGaussian { lambda } => positive_finite("lambda", lambda),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PulseShape::Laplacian { .. } => "laplacian",
            PulseShape::Gaussian { .. } => "gaussian",
            PulseShape::SoftRect { .. } => "soft-rect",
            PulseShape::Rect { .. } => "rect",
            PulseShape::HermiteGaussian { .. } => "hermite-gaussian",
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            PulseShape::Laplacian { beta } => vec![("beta", beta)],
            PulseShape::Gaussian { alpha } => vec![("alpha", alpha)],
            PulseShape::SoftRect { gamma, kappa } => vec![("gamma", gamma), ("kappa", kappa)],
            PulseShape::Rect { kappa } => vec![("kappa", kappa)],
            PulseShape::HermiteGaussian { lambda } => vec![("lambda", lambda)],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    /// The symmetric, non-negative pulse shape at time `t`.
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            PulseShape::Laplacian { beta } => (-beta * t.abs()).exp(),
            PulseShape::Gaussian { alpha } => (-(alpha * t).powi(2)).exp(),
            PulseShape::SoftRect { gamma, kappa } if gamma.is_infinite() => rect(t, kappa),
            PulseShape::SoftRect { gamma, kappa } => {
                0.5 * ((gamma * (t + kappa)).tanh() - (gamma * (t - kappa)).tanh())
            }
            PulseShape::Rect { kappa } => rect(t, kappa),
            PulseShape::HermiteGaussian { lambda } => t.abs() * (-0.5 * (lambda * t).powi(2)).exp(),
        }
    }

    /// Time scale used for carrier and grid defaults.
    pub fn characteristic_width(&self) -> f64 {
        match *self {
            PulseShape::Laplacian { beta } => 1.0 / beta,
            PulseShape::Gaussian { alpha } => 1.0 / alpha,
            PulseShape::SoftRect { kappa, .. } | PulseShape::Rect { kappa } => kappa,
            PulseShape::HermiteGaussian { lambda } => 1.0 / lambda,
        }
    }

    /// Half-width of the default grid; the shape is below 1e-6 of its peak there.
    pub fn default_half_width(&self) -> f64 {
        match *self {
            PulseShape::Laplacian { beta } => 14.0 / beta,
            PulseShape::Gaussian { alpha } => 8.0 / alpha,
            PulseShape::SoftRect { gamma, kappa } if gamma.is_infinite() => 2.0 * kappa,
            PulseShape::SoftRect { gamma, kappa } => kappa + 8.0 / gamma,
            PulseShape::Rect { kappa } => 2.0 * kappa,
            PulseShape::HermiteGaussian { lambda } => 8.0 / lambda,
        }
    }
}

/// Hard rectangle with the half-values at the edges that sgn(0) = 0 implies.
fn rect(t: f64, kappa: f64) -> f64 {
    let edge = (t.abs() - kappa) / kappa;
    if edge.abs() <= 1e-12 {
        0.5
    } else if edge < 0.0 {
        1.0
    } else {
        0.0
    }
}

impl PulseSpec {
    pub fn new(shape: PulseShape, phase: PhaseModel) -> Self {
        Self { shape, phase }
    }

    /// Minimal-compression pulse with the hard ψ = (π/4)·sgn(t) phase.
    pub fn hard(shape: PulseShape) -> Self {
        Self { shape, phase: PhaseModel::HardSignum }
    }

    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if let PhaseModel::TanhSigmoid { gamma } = self.phase {
            positive_finite("sigmoid gamma", gamma)?;
        }
        Ok(())
    }

    /// Symmetric grid at step `dt` wide enough for the default coverage rule.
    ///
    /// For kinked shapes pick `dt` so that the kinks (t = 0, ±κ) land on samples.
    pub fn default_grid(&self, dt: f64) -> Result<Grid> {
        self.validate()?;
        Grid::centered(self.shape.default_half_width(), dt)
    }
}

/// Symmetric pulse shape sampled on `grid`, i.e. the in-phase component of
/// the minimally compressed pulse.
pub fn envelope(spec: &PulseSpec, grid: &Grid) -> Result<SampledWaveform> {
    spec.validate()?;
    let w = SampledWaveform::from_fn(*grid, |t| spec.shape.value(t));
    w.check_coverage(COVERAGE_TOL, spec.shape.name())?;
    Ok(w)
}

/// Sign of each sample time, taken from sample indices when the grid is
/// aligned with t = 0 so the zero sample gets sgn = 0 exactly.
fn signs(grid: &Grid) -> Vec<f64> {
    grid.times().into_iter().map(sgn).collect()
}

/// `y(t) = x(t)·sgn(t)`; requires a sample at t = 0.
pub fn antisymmetric_replica(x: &SampledWaveform) -> Result<SampledWaveform> {
    if x.grid.zero_index().is_none() {
        return Err(Error::GridAlignment(
            "signum replica needs t = 0 as a grid sample (use an odd, centred grid)".into(),
        ));
    }
    let samples = x.samples.iter().zip(signs(&x.grid)).map(|(v, s)| v * s).collect();
    Ok(SampledWaveform { grid: x.grid, samples })
}

/// `w(t) = x(t) + y(t)`.
pub fn causal_sum(x: &SampledWaveform, y: &SampledWaveform) -> Result<SampledWaveform> {
    if !x.grid.matches(&y.grid) {
        return Err(Error::GridMismatch("x and y must share a grid".into()));
    }
    let samples = x.samples.iter().zip(&y.samples).map(|(a, b)| a + b).collect();
    Ok(SampledWaveform { grid: x.grid, samples })
}

/// In-phase and quadrature components for the spec's phase model.
///
/// * HardSignum: `x = s(t)`, `y = s(t)·sgn(t)`, so that `μ = √2·s` off t = 0.
///   For the Hermite-Gaussian shape this is `y = t·exp(-λ²t²/2)` and
///   `x = y·sgn(t) = |t|·exp(-λ²t²/2)`.
/// * TanhSigmoid: `x = μ cos[π tanh(γt)/4]`, `y = μ sin[π tanh(γt)/4]` with
///   `μ = √2·s`, which tends to the HardSignum pair as γ → ∞.
pub fn quadrature_components(spec: &PulseSpec, grid: &Grid) -> Result<ComplexEnvelope> {
    let s = envelope(spec, grid)?;
    let times = grid.times();
    let (x, y) = match spec.phase {
        PhaseModel::HardSignum => {
            let y = s.samples.iter().zip(&times).map(|(v, &t)| v * sgn(t)).collect();
            (s.samples, y)
        }
        PhaseModel::TanhSigmoid { gamma } => times
            .iter()
            .zip(&s.samples)
            .map(|(&t, &v)| {
                let mu = SQRT_2 * v;
                let psi = FRAC_PI_4 * (gamma * t).tanh();
                (mu * psi.cos(), mu * psi.sin())
            })
            .unzip(),
    };
    ComplexEnvelope::new(*grid, x, y)
}
