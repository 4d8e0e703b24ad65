use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use minpulse::compression::{compression_gain, golay_demo_with};
use minpulse::correlation::{
    closed_form_correlations, complex_autocorrelation, determinant_identity, CorrelationResult,
};
use minpulse::envelope::{natural_envelope, phase_function};
use minpulse::io::write_table;
use minpulse::pulses::{causal_sum, quadrature_components};
use minpulse::receiver::{run_chain_indexed, ChainGrids, ChainRun, ChannelSpec, RunManifest};
use minpulse::spectra::{
    closed_form_spectrum, default_omega_grid, kramers_kronig_check, numerical_spectrum,
    spectral_envelope, Spectrum,
};
use minpulse::{Grid, PhaseModel, PulseShape, PulseSpec};
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::CliError;

/// Named equal-length columns, written as CSV or as a JSON object of arrays.
struct Table {
    headers: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Table {
    fn new() -> Self {
        Self { headers: Vec::new(), columns: Vec::new() }
    }

    fn push(&mut self, name: &str, col: Vec<f64>) {
        self.headers.push(name.to_string());
        self.columns.push(col);
    }

    fn write<W: Write>(&self, out: &mut W, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => {
                let headers: Vec<&str> = self.headers.iter().map(String::as_str).collect();
                let cols: Vec<&[f64]> = self.columns.iter().map(Vec::as_slice).collect();
                write_table(out, &headers, &cols)
            }
            Format::Json => {
                let mut obj = Map::new();
                obj.insert("schema".into(), json!(1));
                for (h, c) in self.headers.iter().zip(&self.columns) {
                    obj.insert(h.clone(), json!(c));
                }
                serde_json::to_writer(&mut *out, &Value::Object(obj))?;
                writeln!(out)
            }
        }
    }
}

/// Data goes to `--out` (summary on stdout) or to stdout (summary on stderr).
fn emit(cfg: &RunConfig, table: &Table, summary: Value) -> Result<(), CliError> {
    let line = serde_json::to_string(&summary).expect("summary serializes");
    match &cfg.out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            table.write(&mut f, cfg.format())?;
            f.flush()?;
            println!("{line}");
        }
        None => {
            let stdout = io::stdout();
            let mut lock = BufWriter::new(stdout.lock());
            table.write(&mut lock, cfg.format())?;
            lock.flush()?;
            eprintln!("{line}");
        }
    }
    Ok(())
}

fn write_json(cfg: &RunConfig, value: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    match &cfg.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("--{name} must be finite and > 0, got {v}")))
    }
}

fn time_grid(cfg: &RunConfig, spec: &PulseSpec, default_step: f64) -> Result<Grid, CliError> {
    let width = spec.shape.characteristic_width();
    let dt = positive("dt", cfg.dt.unwrap_or(width * default_step))?;
    let hw = positive("half-width", cfg.half_width.unwrap_or(spec.shape.default_half_width()))?;
    Ok(Grid::centered(hw, dt)?)
}

fn spec_json(spec: &PulseSpec) -> Value {
    serde_json::to_value(spec).expect("spec serializes")
}

pub fn generate(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.pulse()?;
    let grid = time_grid(cfg, &spec, 1e-3)?;
    let z = quadrature_components(&spec, &grid)?;
    let w = causal_sum(&z.in_phase(), &z.quadrature())?;
    let mu = natural_envelope(&z);
    let psi = phase_function(&z);

    let mut t = Table::new();
    t.push("t", grid.times());
    t.push("x", z.x.clone());
    t.push("y", z.y.clone());
    t.push("w", w.samples);
    t.push("mu", mu.samples);
    t.push("psi", psi.psi.samples);
    let summary = json!({
        "schema": 1,
        "command": "generate",
        "pulse": spec_json(&spec),
        "grid": grid,
        "masked_phase_samples": psi.masked.iter().filter(|m| **m).count(),
    });
    emit(cfg, &t, summary)
}

fn omega_grid(cfg: &RunConfig, shape: &PulseShape) -> Result<Grid, CliError> {
    if cfg.omega_max.is_none() && cfg.d_omega.is_none() {
        return Ok(default_omega_grid(shape)?);
    }
    let scale = 1.0 / shape.characteristic_width();
    let d = positive("d-omega", cfg.d_omega.unwrap_or(scale / 100.0))?;
    let max = positive("omega-max", cfg.omega_max.unwrap_or(40.0 * scale))?;
    Ok(Grid::centered(max, d)?)
}

fn has_closed_spectrum(spec: &PulseSpec) -> bool {
    spec.phase == PhaseModel::HardSignum
        && matches!(
            spec.shape,
            PulseShape::Gaussian { .. } | PulseShape::Laplacian { .. } | PulseShape::HermiteGaussian { .. }
        )
}

pub fn spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.pulse()?;
    let omega = omega_grid(cfg, &spec.shape)?;
    let compare = cfg.compare.unwrap_or(false);
    let closed = has_closed_spectrum(&spec);

    let numerical = if !closed || compare {
        let grid = time_grid(cfg, &spec, 1e-3)?;
        let z = quadrature_components(&spec, &grid)?;
        let w = causal_sum(&z.in_phase(), &z.quadrature())?;
        Some(numerical_spectrum(&w, &omega)?)
    } else {
        None
    };
    let sp: Spectrum = if closed {
        closed_form_spectrum(&spec, &omega)?
    } else {
        numerical.clone().expect("numerical spectrum computed")
    };

    let kk = kramers_kronig_check(&sp);
    let mut t = Table::new();
    t.push("omega", omega.times());
    t.push("X", sp.re.clone());
    t.push("Y", sp.im.clone());
    t.push("absW", spectral_envelope(&sp).samples);
    let mut summary = json!({
        "schema": 1,
        "command": "spectrum",
        "pulse": spec_json(&spec),
        "source": if closed { "closed-form" } else { "numerical" },
        "omega_grid": omega,
        "kk": kk,
        "kk_relative_rms": kk.relative_rms(),
    });
    if let Some(k0) = omega.zero_index() {
        summary["X0"] = json!(sp.re[k0]);
    }
    if let (true, Some(num)) = (closed, &numerical) {
        let dx: Vec<f64> = num.re.iter().zip(&sp.re).map(|(a, b)| a - b).collect();
        let dy: Vec<f64> = num.im.iter().zip(&sp.im).map(|(a, b)| a - b).collect();
        let max_diff = dx.iter().chain(&dy).fold(0.0_f64, |m, v| m.max(v.abs()));
        t.push("dX", dx);
        t.push("dY", dy);
        summary["max_abs_diff"] = json!(max_diff);
    }
    emit(cfg, &t, summary)
}

fn lag_grid(cfg: &RunConfig, spec: &PulseSpec, grid: &Grid) -> Result<Grid, CliError> {
    let width = spec.shape.characteristic_width();
    let step = positive("lag-step", cfg.lag_step.unwrap_or(width / 100.0))?;
    let stride = (step / grid.dt).round().max(1.0);
    if ((step / grid.dt) - stride).abs() > 1e-6 * stride {
        return Err(CliError::Config(format!(
            "--lag-step {step} is not a multiple of the time step {}",
            grid.dt
        )));
    }
    let step = stride * grid.dt;
    let max = positive("lag-max", cfg.lag_max.unwrap_or(spec.shape.default_half_width()))?;
    let m = (max / step - 1e-9).ceil() as usize;
    Ok(Grid::symmetric(m, step)?)
}

fn peak(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

pub fn correlate(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.pulse()?;
    let grid = time_grid(cfg, &spec, 1e-4)?;
    let lags = lag_grid(cfg, &spec, &grid)?;
    let z = quadrature_components(&spec, &grid)?;
    let engine = complex_autocorrelation(&z, &lags)?;
    let closed = match closed_form_correlations(&spec, &lags) {
        Ok(mut c) => {
            if let Some(norm) = c.normalization.take() {
                for tr in [&mut c.rxx, &mut c.ryy, &mut c.rxy, &mut c.ryx, &mut c.rsum, &mut c.rdelta] {
                    tr.iter_mut().for_each(|v| *v *= norm);
                }
            }
            Some(c)
        }
        Err(_) => None,
    };
    let normalized = cfg.normalized.unwrap_or(false);
    let (shown, reference): (CorrelationResult, Option<CorrelationResult>) = if normalized {
        (engine.normalized(), closed.as_ref().map(CorrelationResult::normalized))
    } else {
        (engine.clone(), closed.clone())
    };

    let names = ["Rxx", "Ryy", "Rxy", "Ryx", "Rsum", "Rdelta"];
    let mut t = Table::new();
    t.push("tau", lags.times());
    for (name, tr) in names.iter().zip(shown.traces()) {
        t.push(name, tr.to_vec());
    }
    let rsum_peak = peak(&engine.rsum);
    let mut summary = json!({
        "schema": 1,
        "command": "correlate",
        "pulse": spec_json(&spec),
        "grid": grid,
        "lag_grid": lags,
        "normalized": normalized,
        "rsum0": engine.rsum_at_zero(),
        "determinant": determinant_identity(&engine),
    });
    if let Some(k0) = lags.zero_index() {
        if k0 > 0 && k0 + 1 < lags.n {
            let r = &engine.rsum;
            summary["rsum_slopes"] = json!({
                "left": (r[k0] - r[k0 - 1]) / lags.dt,
                "right": (r[k0 + 1] - r[k0]) / lags.dt,
            });
        }
    }
    if let Some(reference) = reference {
        let mut deltas = Map::new();
        for ((name, a), b) in names.iter().zip(shown.traces()).zip(reference.traces()) {
            let d: Vec<f64> = a.iter().zip(b).map(|(u, v)| u - v).collect();
            deltas.insert(name.to_string(), json!(peak(&d)));
            t.push(&format!("d{name}"), d);
        }
        summary["rsum0_closed_form"] = json!(closed.as_ref().map(|c| c.rsum_at_zero()));
        summary["max_abs_delta"] = Value::Object(deltas);
        summary["rsum_peak"] = json!(rsum_peak);
    }
    emit(cfg, &t, summary)
}

pub fn gain(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.pulse()?;
    let grid = time_grid(cfg, &spec, 2e-3)?;
    let report = compression_gain(&spec, &grid)?;
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["schema"] = json!(1);
    v["dt"] = json!(grid.dt);
    write_json(cfg, &v)
}

fn spread(runs: &[Vec<f64>]) -> f64 {
    let base = &runs[0];
    let scale = peak(base);
    let worst = runs
        .iter()
        .flat_map(|r| r.iter().zip(base).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

pub fn receiver(cfg: &RunConfig) -> Result<(), CliError> {
    let spec = cfg.pulse()?;
    let base = ChannelSpec::default();
    let env_dt = ChainGrids::plan(&spec, 0.0, cfg.f0, cfg.rf_dt)?.envelope.dt;
    let delay_samples = cfg.delay.unwrap_or(0);
    let channel = ChannelSpec {
        phi: cfg.phi.unwrap_or(base.phi),
        delay: delay_samples as f64 * env_dt,
        amplitude: cfg.amplitude.unwrap_or(base.amplitude),
        noise_sigma: cfg.noise_sigma.unwrap_or(base.noise_sigma),
        seed: cfg.seed.unwrap_or(base.seed),
    };
    let run_index = cfg.run_index.unwrap_or(0);
    let sweep = cfg.phi_sweep.unwrap_or(1);
    if sweep == 0 {
        return Err(CliError::Config("--phi-sweep must be at least 1".into()));
    }

    let mut runs: Vec<ChainRun> = Vec::with_capacity(sweep);
    for k in 0..sweep {
        let ch = ChannelSpec { phi: channel.phi + 2.0 * PI * k as f64 / sweep as f64, ..channel };
        runs.push(run_chain_indexed(&spec, &ch, cfg.f0, cfg.rf_dt, run_index)?);
    }
    let first = &runs[0];
    let tr = &first.trace;

    let mut t = Table::new();
    t.push("tau", tr.lags.times());
    t.push("a", tr.a.clone());
    t.push("b", tr.b.clone());
    t.push("c", tr.c.clone());
    t.push("d", tr.d.clone());
    t.push("processor", tr.processor_out.clone());
    t.push("sumsq", first.sum_of_squares());

    let mut summary = json!({
        "schema": 1,
        "command": "receiver",
        "pulse": spec_json(&spec),
        "channel": channel,
        "f0": first.grids.f0,
        "envelope_dt": env_dt,
        "peak": peak(&tr.processor_out),
        "estimated_delay": first.estimated_delay,
        "peak_lag_samples": (first.estimated_delay / env_dt).round() as i64,
        "band_warning": first.band_warning,
    });
    if sweep > 1 {
        let procs: Vec<Vec<f64>> = runs.iter().map(|r| r.trace.processor_out.clone()).collect();
        let sumsq: Vec<Vec<f64>> = runs.iter().map(ChainRun::sum_of_squares).collect();
        summary["phi_sweep"] = json!({
            "count": sweep,
            "processor_spread": spread(&procs),
            "sumsq_spread": spread(&sumsq),
        });
    }
    if let Some(path) = &cfg.manifest {
        let manifest = RunManifest::new(&spec, &channel, first, run_index);
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(path, text + "\n")?;
    }
    emit(cfg, &t, summary)
}

fn row(v: &[i64]) -> String {
    v.iter().map(|&x| if x == 0 { "0".to_string() } else { format!("{x:+}") }).collect::<Vec<_>>().join(" ")
}

pub fn golay(cfg: &RunConfig) -> Result<(), CliError> {
    let kappa = positive("kappa", cfg.kappa.unwrap_or(1.0))?;
    let dt = positive("dt", cfg.dt.unwrap_or(kappa * 1e-3))?;
    let demo = golay_demo_with(kappa, dt)?;
    println!("sequence  ({})", row(&demo.first));
    println!("sequence  ({})", row(&demo.second));
    println!("acf       ({})", row(&demo.first_acf));
    println!("acf       ({})", row(&demo.second_acf));
    println!("sum       ({})", row(&demo.sum));
    if let Some(path) = &cfg.out {
        let c = &demo.continuous;
        let mut t = Table::new();
        t.push("tau", c.lags.times());
        for (name, tr) in ["Rxx", "Ryy", "Rxy", "Ryx", "Rsum", "Rdelta"].iter().zip(c.traces()) {
            t.push(name, tr.to_vec());
        }
        let mut f = BufWriter::new(File::create(path)?);
        t.write(&mut f, cfg.format())?;
        f.flush()?;
    }
    Ok(())
}
