//! CSV output. Numbers are written with 17 significant digits so they
//! round-trip exactly.

use std::io::{self, Write};

use crate::correlation::CorrelationResult;
use crate::receiver::{sum_of_squares_invariant, ReceiverTrace};
use crate::spectra::{spectral_envelope, Spectrum};

pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

/// Header row followed by one row per index of the (equal-length) columns.
pub fn write_table<W: Write>(out: &mut W, headers: &[&str], columns: &[&[f64]]) -> io::Result<()> {
    assert_eq!(headers.len(), columns.len(), "one header per column");
    let n = columns.first().map_or(0, |c| c.len());
    assert!(columns.iter().all(|c| c.len() == n), "columns must have equal length");
    writeln!(out, "{}", headers.join(","))?;
    let mut row = String::new();
    for k in 0..n {
        row.clear();
        for (j, c) in columns.iter().enumerate() {
            if j > 0 {
                row.push(',');
            }
            row.push_str(&format_number(c[k]));
        }
        writeln!(out, "{row}")?;
    }
    Ok(())
}

pub fn write_trajectory<W: Write>(out: &mut W, rows: &[(f64, f64, f64)]) -> io::Result<()> {
    let t: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let x: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.2).collect();
    write_table(out, &["t", "x", "y"], &[&t, &x, &y])
}

pub fn write_spectrum<W: Write>(out: &mut W, sp: &Spectrum) -> io::Result<()> {
    let omega = sp.omega.times();
    let mag = spectral_envelope(sp).samples;
    write_table(out, &["omega", "X", "Y", "absW"], &[&omega, &sp.re, &sp.im, &mag])
}

pub fn write_correlation<W: Write>(out: &mut W, res: &CorrelationResult) -> io::Result<()> {
    let tau = res.lags.times();
    let [rxx, ryy, rxy, ryx, rsum, rdelta] = res.traces();
    write_table(
        out,
        &["tau", "Rxx", "Ryy", "Rxy", "Ryx", "Rsum", "Rdelta"],
        &[&tau, rxx, ryy, rxy, ryx, rsum, rdelta],
    )
}

pub fn write_receiver<W: Write>(out: &mut W, tr: &ReceiverTrace) -> io::Result<()> {
    let tau = tr.lags.times();
    let sumsq = sum_of_squares_invariant(tr);
    write_table(
        out,
        &["tau", "a", "b", "c", "d", "processor", "sumsq"],
        &[&tau, &tr.a, &tr.b, &tr.c, &tr.d, &tr.processor_out, &sumsq],
    )
}
