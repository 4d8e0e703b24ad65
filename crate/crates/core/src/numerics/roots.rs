use crate::error::{Error, Result};
use crate::numerics::grid::SampledWaveform;

/// Bisection for a sign change of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Shape(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Full width at half height of a peaked trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfHeightWidth {
    pub width: f64,
    pub left: f64,
    pub right: f64,
    /// Set when several samples share the peak value; the outermost crossings
    /// are used.
    pub ambiguous: bool,
}

/// Width between the outermost half-maximum crossings, each located by
/// bisection on the linear interpolant between the bracketing samples.
pub fn find_half_height_width(trace: &SampledWaveform) -> Result<HalfHeightWidth> {
    let v = &trace.samples;
    let peak = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(peak > 0.0) {
        return Err(Error::Shape("trace has no positive maximum".into()));
    }
    let ambiguous = v.iter().filter(|&&x| x == peak).count() > 1;
    let half = 0.5 * peak;

    let first = v.iter().position(|&x| x >= half).expect("peak is above half");
    let last = v.iter().rposition(|&x| x >= half).expect("peak is above half");
    if first == 0 {
        return Err(Error::Shape("no half-height crossing on the left; trace starts above half".into()));
    }
    if last == v.len() - 1 {
        return Err(Error::Shape("no half-height crossing on the right; trace ends above half".into()));
    }

    let times = trace.grid.times();
    let crossing = |i: usize, j: usize| {
        let (t_i, t_j, v_i, v_j) = (times[i], times[j], v[i], v[j]);
        let line = |t: f64| v_i + (v_j - v_i) * (t - t_i) / (t_j - t_i) - half;
        bisect(line, t_i, t_j, 1e-12 * trace.grid.dt.max(f64::MIN_POSITIVE))
    };
    let left = crossing(first - 1, first)?;
    let right = crossing(last, last + 1)?;
    Ok(HalfHeightWidth { width: right - left, left, right, ambiguous })
}
