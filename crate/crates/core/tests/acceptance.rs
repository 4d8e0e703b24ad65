//! Acceptance checks. Prints one PASS/FAIL line per criterion and fails if
//! any criterion fails.
//!
//! Run with `cargo test -p minpulse --test acceptance -- --nocapture`.

use std::f64::consts::PI;
use std::time::Instant;

use minpulse::compression::{compression_gain, golay_demo};
use minpulse::correlation::{
    auxiliary_ab, closed_form_correlations, complex_autocorrelation, determinant_identity,
    CorrelationResult,
};
use minpulse::io::{write_correlation, write_receiver, write_spectrum, write_trajectory};
use minpulse::envelope::phasor_trajectory;
use minpulse::numerics::{dawson, hilbert, trapz_samples};
use minpulse::pulses::{causal_sum, quadrature_components};
use minpulse::receiver::{run_chain, ChannelSpec};
use minpulse::spectra::{closed_form_spectrum, kramers_kronig_check};
use minpulse::{Grid, PulseShape, PulseSpec, SampledWaveform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn hard(shape: PulseShape) -> PulseSpec {
    PulseSpec::hard(shape)
}

fn peak(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn gains() -> Outcome {
    let start = Instant::now();
    let cases = [
        (PulseShape::Laplacian { beta: 1.0 }, 2.42, 0.02),
        (PulseShape::Gaussian { alpha: 1.0 }, 2.10, 0.05),
        (PulseShape::Rect { kappa: 1.0 }, 2.000, 0.005),
        (PulseShape::SoftRect { gamma: PI, kappa: 1.0 }, 2.00, 0.05),
        (PulseShape::SoftRect { gamma: 3.0 * PI, kappa: 1.0 }, 2.00, 0.05),
        (PulseShape::HermiteGaussian { lambda: 1.0 }, 2.30, 0.05),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (shape, want, tol) in cases {
        let spec = hard(shape);
        let grid = spec.default_grid(2e-3 * shape.characteristic_width()).unwrap();
        let g = compression_gain(&spec, &grid).unwrap().g_c;
        let ok = (g - want).abs() <= tol;
        pass &= ok;
        parts.push(format!("{} {g:.4} (want {want}±{tol}){}", shape.name(), if ok { "" } else { " OUT" }));
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 5.0;
    parts.push(format!("{secs:.2} s"));
    outcome(pass, parts.join("; "))
}

fn kramers_kronig() -> Outcome {
    let omega = Grid::symmetric(4000, 0.01).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for shape in [PulseShape::Gaussian { alpha: 1.0 }, PulseShape::HermiteGaussian { lambda: 1.0 }] {
        let sp = closed_form_spectrum(&hard(shape), &omega).unwrap();
        let rel = kramers_kronig_check(&sp).relative_rms();
        pass &= rel < 1e-3;
        parts.push(format!("{} rms {rel:.2e}", shape.name()));
    }
    let a = 1.0;
    let sp = closed_form_spectrum(&hard(PulseShape::Gaussian { alpha: a }), &omega).unwrap();
    let hx = hilbert(&sp.real_part());
    let worst = omega
        .times()
        .iter()
        .zip(&hx.samples)
        .map(|(w, h)| (h - 2.0 / a * dawson(w / (2.0 * a)).unwrap()).abs())
        .fold(0.0, f64::max);
    pass &= worst < 1e-3;
    parts.push(format!("gaussian H{{X}} vs Dawson max {worst:.2e}"));
    outcome(pass, parts.join("; "))
}

/// Engine traces and closed forms (scaled to the engine) on the default correlation grid.
fn engine_and_closed(shape: PulseShape) -> (CorrelationResult, CorrelationResult) {
    let spec = hard(shape);
    let w = shape.characteristic_width();
    let grid = spec.default_grid(1e-4 * w).unwrap();
    let lags = Grid::symmetric((shape.default_half_width() / (1e-2 * w)).round() as usize, 1e-2 * w).unwrap();
    let z = quadrature_components(&spec, &grid).unwrap();
    let engine = complex_autocorrelation(&z, &lags).unwrap();
    let mut closed = closed_form_correlations(&spec, &lags).unwrap();
    if let Some(norm) = closed.normalization.take() {
        for tr in [&mut closed.rxx, &mut closed.ryy, &mut closed.rxy, &mut closed.ryx, &mut closed.rsum, &mut closed.rdelta] {
            tr.iter_mut().for_each(|v| *v *= norm);
        }
    }
    (engine, closed)
}

fn closed_forms() -> Outcome {
    let cases = [
        (PulseShape::Gaussian { alpha: 1.0 }, 1e-4),
        (PulseShape::HermiteGaussian { lambda: 1.0 }, 1e-4),
        (PulseShape::Laplacian { beta: 1.0 }, 1e-3),
        (PulseShape::Rect { kappa: 1.0 }, 1e-3),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (shape, tol) in cases {
        let (engine, closed) = engine_and_closed(shape);
        let scale = peak(&closed.rsum);
        let err = engine
            .traces()
            .iter()
            .zip(closed.traces())
            .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).abs()))
            .fold(0.0, f64::max)
            / scale;
        pass &= err < tol;
        parts.push(format!("{} {err:.2e} (< {tol:.0e})", shape.name()));
    }
    outcome(pass, parts.join("; "))
}

fn determinant() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for shape in [
        PulseShape::Laplacian { beta: 1.0 },
        PulseShape::Gaussian { alpha: 1.0 },
        PulseShape::SoftRect { gamma: PI, kappa: 1.0 },
        PulseShape::Rect { kappa: 1.0 },
        PulseShape::HermiteGaussian { lambda: 1.0 },
    ] {
        let spec = hard(shape);
        let grid = spec.default_grid(1e-3 * shape.characteristic_width()).unwrap();
        let lags = Grid::symmetric(grid.n / 2, grid.dt).unwrap();
        let z = quadrature_components(&spec, &grid).unwrap();
        let rel = determinant_identity(&complex_autocorrelation(&z, &lags).unwrap()).relative;
        pass &= rel < 1e-6;
        parts.push(format!("{} {rel:.1e}", shape.name()));
    }
    let beta = 1.7;
    let lags = Grid::symmetric(2000, 5e-3).unwrap();
    let c = closed_form_correlations(&hard(PulseShape::Laplacian { beta }), &lags).unwrap();
    let worst = lags
        .times()
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let det = c.rxx[k] * c.ryy[k] - c.rxy[k] * c.ryx[k];
            (det - (-2.0 * beta * t.abs()).exp() / (beta * beta)).abs() * beta * beta
        })
        .fold(0.0, f64::max);
    pass &= worst < 1e-6;
    parts.push(format!("laplacian closed form vs e^(-2β|τ|)/β² {worst:.1e}"));
    outcome(pass, parts.join("; "))
}

fn phase_invariance() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for shape in [
        PulseShape::Gaussian { alpha: 1.0 },
        PulseShape::Laplacian { beta: 1.0 },
        PulseShape::SoftRect { gamma: PI, kappa: 1.0 },
        PulseShape::HermiteGaussian { lambda: 1.0 },
    ] {
        let spec = hard(shape);
        let runs: Vec<_> = (0..8)
            .map(|k| {
                let ch = ChannelSpec { phi: k as f64 * 2.0 * PI / 8.0, ..Default::default() };
                run_chain(&spec, &ch, None).unwrap()
            })
            .collect();
        let spread = |f: &dyn Fn(usize) -> Vec<f64>| {
            let base = f(0);
            let scale = peak(&base);
            (1..runs.len())
                .flat_map(|i| f(i).into_iter().zip(&base).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>())
                .fold(0.0, f64::max)
                / scale
        };
        let sp_proc = spread(&|i| runs[i].trace.processor_out.clone());
        let sp_sq = spread(&|i| runs[i].sum_of_squares());
        let energy = closed_energy(&spec);
        let pk = peak(&runs[0].trace.processor_out);
        let rel = (pk / (energy * energy) - 1.0).abs();
        let ok = sp_proc < 1e-6 && sp_sq < 1e-6 && rel < 0.02;
        pass &= ok;
        parts.push(format!(
            "{} spread {sp_proc:.1e}/{sp_sq:.1e}, peak/R_Σ(0)² − 1 = {:+.2}%{}",
            shape.name(),
            100.0 * (pk / (energy * energy) - 1.0),
            if ok { "" } else { " OUT" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn golay() -> Outcome {
    let d = golay_demo().unwrap();
    let ok = d.first_acf == [1, 2, 1] && d.second_acf == [-1, 2, -1] && d.sum == [0, 4, 0];
    outcome(ok, format!("{:?} + {:?} = {:?}", d.first_acf, d.second_acf, d.sum))
}

/// R_Σ(0) as total energy of x + jy; for the rect pulse numerically, since the
/// closed form is energy-normalised.
fn closed_energy(spec: &PulseSpec) -> f64 {
    match spec.shape {
        PulseShape::Gaussian { alpha } => (2.0 * PI).sqrt() / alpha,
        PulseShape::Laplacian { beta } => 2.0 / beta,
        PulseShape::HermiteGaussian { lambda } => PI.sqrt() / lambda.powi(3),
        PulseShape::Rect { kappa } => 4.0 * kappa,
        PulseShape::SoftRect { .. } => {
            let grid = spec.default_grid(1e-4 * spec.shape.characteristic_width()).unwrap();
            let z = quadrature_components(spec, &grid).unwrap();
            let (xe, ye) = split_energies(&z.in_phase(), &z.quadrature());
            xe + ye
        }
    }
}

/// Energies of x and y, integrating each half-line with one-sided limits at t = 0.
fn split_energies(x: &SampledWaveform, y: &SampledWaveform) -> (f64, f64) {
    let k0 = x.grid.zero_index().unwrap();
    let dt = x.grid.dt;
    let half = |v: &[f64], edge: usize, value: f64| {
        let mut sq: Vec<f64> = v.iter().map(|s| s * s).collect();
        sq[edge] = value * value;
        trapz_samples(&sq, dt).unwrap()
    };
    let x0 = x.samples[k0];
    let ex = half(&x.samples[..=k0], k0, x0) + half(&x.samples[k0..], 0, x0);
    // y(0±) = ±x(0) for the signum replica.
    let ey = half(&y.samples[..=k0], k0, -x0) + half(&y.samples[k0..], 0, x0);
    (ex, ey)
}

fn energy_and_causality() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for shape in [
        PulseShape::Gaussian { alpha: 1.0 },
        PulseShape::Laplacian { beta: 1.0 },
        PulseShape::HermiteGaussian { lambda: 1.0 },
    ] {
        let spec = hard(shape);
        let grid = spec.default_grid(1e-3 * shape.characteristic_width()).unwrap();
        let z = quadrature_components(&spec, &grid).unwrap();
        let (x, y) = (z.in_phase(), z.quadrature());
        let (ex, ey) = split_energies(&x, &y);
        let w = causal_sum(&x, &y).unwrap();
        let causal = grid.times().iter().zip(&w.samples).all(|(t, v)| *t >= 0.0 || *v == 0.0);
        let energy = closed_energy(&spec);
        let cf = closed_form_correlations(&spec, &Grid::symmetric(1, 0.1).unwrap()).unwrap().rsum_at_zero();
        let e_rel = (ey / ex - 1.0).abs();
        let num_rel = ((ex + ey) / energy - 1.0).abs();
        let cf_rel = (cf / energy - 1.0).abs();
        let ok = e_rel < 1e-9 && causal && num_rel < 1e-6 && cf_rel < 1e-6;
        pass &= ok;
        parts.push(format!(
            "{} E_y/E_x−1 {e_rel:.0e}, causal {causal}, R_Σ(0) closed {cf_rel:.0e} numeric {num_rel:.0e}",
            shape.name()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn auxiliary_identities() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(2024);
    let mut pass = true;
    let mut parts = Vec::new();
    let families: [(&str, fn(f64) -> PulseShape); 5] = [
        ("laplacian", |p| PulseShape::Laplacian { beta: p }),
        ("gaussian", |p| PulseShape::Gaussian { alpha: p }),
        ("soft-rect", |p| PulseShape::SoftRect { gamma: 4.0 * p, kappa: 1.0 / p }),
        ("rect", |p| PulseShape::Rect { kappa: 1.0 / p }),
        ("hermite-gaussian", |p| PulseShape::HermiteGaussian { lambda: p }),
    ];
    for (name, make) in families {
        let mut worst = 0.0_f64;
        for _ in 0..20 {
            let shape = make(rng.gen_range(0.5..2.0));
            let spec = hard(shape);
            let grid = spec.default_grid(shape.characteristic_width() / 200.0).unwrap();
            let z = quadrature_components(&spec, &grid).unwrap();
            let steps = rng.gen_range(1..grid.n / 2 - 1);
            let tau = steps as f64 * grid.dt;
            let lags = Grid::new(tau, grid.dt, 2).unwrap();
            let r = complex_autocorrelation(&z, &lags).unwrap();
            let implied = if name == "hermite-gaussian" {
                auxiliary_ab(&z.quadrature(), tau).unwrap().bimodal()
            } else {
                auxiliary_ab(&z.in_phase(), tau).unwrap().unimodal()
            };
            let scale = closed_energy(&spec);
            let err = [
                implied.rxx - r.rxx[0],
                implied.ryy - r.ryy[0],
                implied.rsum - r.rsum[0],
                implied.rdelta - r.rdelta[0],
            ]
            .iter()
            .fold(0.0_f64, |m, e| m.max(e.abs()))
                / scale;
            worst = worst.max(err);
        }
        pass &= worst < 1e-6;
        parts.push(format!("{name} {worst:.1e}"));
    }
    outcome(pass, parts.join("; "))
}

/// Each figure's data comes from a writer with a fixed column layout.
fn figure_recipes() -> Outcome {
    let spec = hard(PulseShape::Gaussian { alpha: 1.0 });
    let grid = spec.default_grid(1e-2).unwrap();
    let z = quadrature_components(&spec, &grid).unwrap();
    let header = |buf: Vec<u8>| String::from_utf8(buf).unwrap().lines().next().unwrap().to_string();

    let mut a = Vec::new();
    write_trajectory(&mut a, &phasor_trajectory(&z)).unwrap();
    let mut b = Vec::new();
    let sp = closed_form_spectrum(&spec, &Grid::symmetric(100, 0.1).unwrap()).unwrap();
    write_spectrum(&mut b, &sp).unwrap();
    let mut c = Vec::new();
    let lags = Grid::symmetric(50, 0.1).unwrap();
    write_correlation(&mut c, &complex_autocorrelation(&z, &lags).unwrap()).unwrap();
    let mut d = Vec::new();
    write_receiver(&mut d, &run_chain(&spec, &ChannelSpec::default(), None).unwrap().trace).unwrap();

    let got = [header(a), header(b), header(c), header(d)];
    let want = [
        "t,x,y",
        "omega,X,Y,absW",
        "tau,Rxx,Ryy,Rxy,Ryx,Rsum,Rdelta",
        "tau,a,b,c,d,processor,sumsq",
    ];
    outcome(got == want, got.join(" | "))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("compression gains", gains),
        ("Kramers-Kronig pair", kramers_kronig),
        ("closed-form correlations", closed_forms),
        ("determinant identity", determinant),
        ("phase invariance", phase_invariance),
        ("Golay pair", golay),
        ("energy and causality", energy_and_causality),
        ("auxiliary identities", auxiliary_identities),
        ("figure data recipes", figure_recipes),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        println!("{} {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
