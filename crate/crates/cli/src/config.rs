//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::path::{Path, PathBuf};

use minpulse::{PhaseModel, PulseShape, PulseSpec};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Every key any command understands. Unknown keys in a config file are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// JSON config file; flags given on the command line take precedence
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// laplacian, gaussian, soft-rect, rect or hermite-gaussian
    #[arg(long)]
    pub shape: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// soft-rect edge steepness ("inf" for a hard rectangle)
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// hard-signum (default) or tanh-sigmoid
    #[arg(long)]
    pub phase: Option<String>,
    /// steepness of the tanh phase transition
    #[arg(long)]
    pub sigmoid_gamma: Option<f64>,

    /// time step
    #[arg(long)]
    pub dt: Option<f64>,
    /// half-width of the time grid
    #[arg(long)]
    pub half_width: Option<f64>,

    #[arg(long)]
    pub omega_max: Option<f64>,
    #[arg(long)]
    pub d_omega: Option<f64>,
    /// also compute the numerical transform and emit its difference from the closed form
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub compare: Option<bool>,

    #[arg(long)]
    pub lag_max: Option<f64>,
    #[arg(long)]
    pub lag_step: Option<f64>,
    /// divide every trace by its own peak
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub normalized: Option<bool>,

    /// carrier phase offset (rad)
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<f64>,
    /// number of equally spaced carrier phases to run
    #[arg(long)]
    pub phi_sweep: Option<usize>,
    /// target delay in envelope samples
    #[arg(long)]
    pub delay: Option<u64>,
    #[arg(long)]
    pub amplitude: Option<f64>,
    #[arg(long)]
    pub noise_sigma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub run_index: Option<u64>,
    /// carrier frequency (Hz)
    #[arg(long)]
    pub f0: Option<f64>,
    /// RF sample step
    #[arg(long)]
    pub rf_dt: Option<f64>,
    /// write the run manifest (JSON) here
    #[arg(long)]
    pub manifest: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// output file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl RunConfig {
    /// Loads the file named by `--config` (if any) and applies the flags on top.
    pub fn resolve(flags: RunConfig) -> Result<RunConfig, CliError> {
        let mut cfg = match &flags.config {
            Some(path) => load(path)?,
            None => RunConfig::default(),
        };
        overlay!(cfg, flags; shape, alpha, beta, gamma, kappa, lambda, phase, sigmoid_gamma,
            dt, half_width, omega_max, d_omega, compare, lag_max, lag_step, normalized,
            phi, phi_sweep, delay, amplitude, noise_sigma, seed, run_index, f0, rf_dt,
            manifest, format, out);
        Ok(cfg)
    }

    pub fn pulse(&self) -> Result<PulseSpec, CliError> {
        let name = self.shape.as_deref().ok_or_else(|| CliError::Config("--shape is required".into()))?;
        let need = |key: &str, v: Option<f64>| {
            v.ok_or_else(|| CliError::Config(format!("shape {name} needs --{key}")))
        };
        let (shape, used): (PulseShape, &[&str]) = match name {
            "laplacian" => (PulseShape::Laplacian { beta: need("beta", self.beta)? }, &["beta"]),
            "gaussian" => (PulseShape::Gaussian { alpha: need("alpha", self.alpha)? }, &["alpha"]),
            "soft-rect" => (
                PulseShape::SoftRect { gamma: need("gamma", self.gamma)?, kappa: need("kappa", self.kappa)? },
                &["gamma", "kappa"],
            ),
            "rect" => (PulseShape::Rect { kappa: need("kappa", self.kappa)? }, &["kappa"]),
            "hermite-gaussian" => {
                (PulseShape::HermiteGaussian { lambda: need("lambda", self.lambda)? }, &["lambda"])
            }
            other => return Err(CliError::Config(format!("unknown shape '{other}'"))),
        };
        let given = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("lambda", self.lambda),
        ];
        for (key, v) in given {
            if v.is_some() && !used.contains(&key) {
                return Err(CliError::Config(format!("--{key} does not apply to shape {name}")));
            }
        }
        let phase = match (self.phase.as_deref().unwrap_or("hard-signum"), self.sigmoid_gamma) {
            ("hard-signum", None) => PhaseModel::HardSignum,
            ("hard-signum", Some(_)) => {
                return Err(CliError::Config("--sigmoid-gamma needs --phase tanh-sigmoid".into()))
            }
            ("tanh-sigmoid", Some(gamma)) => PhaseModel::TanhSigmoid { gamma },
            ("tanh-sigmoid", None) => {
                return Err(CliError::Config("--phase tanh-sigmoid needs --sigmoid-gamma".into()))
            }
            (other, _) => return Err(CliError::Config(format!("unknown phase model '{other}'"))),
        };
        let spec = PulseSpec::new(shape, phase);
        spec.validate()?;
        Ok(spec)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
