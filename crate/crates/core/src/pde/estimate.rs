//! Extrapolation of the blow-up time from the tail of φ(t).
//!
//! Near a power-law singularity `φ ≈ A(t* − t)^{−γ}`, so `log φ` is affine
//! in `log(t_c − t)` exactly when `t_c = t*`. For each candidate offset
//! `δ = t_c − t_last` the affine fit's residual is computed; the offset is
//! scanned on a logarithmic grid and refined by golden section.

use crate::error::{Error, Result};
use crate::optimize::golden_section_max;

use super::{Sample, SimulationSeries};

/// Samples enter the fit once φ exceeds this level.
pub const PHI_FIT_FLOOR: f64 = 1e3;
pub const MIN_FIT_SAMPLES: usize = 8;
/// φ must grow at least this much across the fit window.
const MIN_GROWTH: f64 = 10.0;
/// Sub-windows used for the uncertainty need this many samples.
const MIN_SUBWINDOW: usize = 5;
const SCAN_POINTS: usize = 241;
const SCAN_DECADES: f64 = 12.0;

/// `(t_star_est, uncertainty)` for a series whose verdict is blow-up.
pub fn estimate_blowup_time(series: &SimulationSeries) -> Result<(f64, f64)> {
    if !series.verdict.is_blowup() {
        return Err(Error::Usage(format!(
            "blow-up time requested for a run with verdict {}",
            series.verdict.name()
        )));
    }
    fit_blowup_time(&series.samples)
}

/// Fits the trailing samples with φ above [`PHI_FIT_FLOOR`]. The estimate
/// is never below the last sample time; the uncertainty is the spread of
/// the estimates over the full window and its last half and last third.
pub fn fit_blowup_time(samples: &[Sample]) -> Result<(f64, f64)> {
    let start = samples
        .iter()
        .rposition(|s| !(s.phi > PHI_FIT_FLOOR))
        .map_or(0, |i| i + 1);
    let window = &samples[start..];
    if window.len() < MIN_FIT_SAMPLES {
        return Err(Error::Estimation(format!(
            "{} samples with phi above {PHI_FIT_FLOOR:e}, need {MIN_FIT_SAMPLES}",
            window.len()
        )));
    }
    let growth = window[window.len() - 1].phi / window[0].phi;
    if !(growth >= MIN_GROWTH) {
        return Err(Error::Estimation(format!(
            "phi grows only by a factor {growth:.3} across the fit window"
        )));
    }
    let full = fit_window(window)?;
    let mut lo = full;
    let mut hi = full;
    for divisor in [2, 3] {
        let sub = &window[window.len() - window.len() / divisor..];
        if sub.len() >= MIN_SUBWINDOW {
            if let Ok(t) = fit_window(sub) {
                lo = lo.min(t);
                hi = hi.max(t);
            }
        }
    }
    Ok((full, hi - lo))
}

/// Residual sum of squares of the affine fit of `log φ` against `log(t_last + δ − t)`.
fn residual(window: &[Sample], delta: f64) -> f64 {
    let t_last = window[window.len() - 1].t;
    let n = window.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for s in window {
        let x = ((t_last - s.t) + delta).ln();
        let y = s.phi.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    let cxx = sxx - sx * sx / n;
    let cxy = sxy - sx * sy / n;
    let cyy = syy - sy * sy / n;
    (cyy - cxy * cxy / cxx).max(0.0)
}

fn fit_window(window: &[Sample]) -> Result<f64> {
    let t_last = window[window.len() - 1].t;
    let span = t_last - window[0].t;
    if !(span > 0.0) {
        return Err(Error::Estimation("fit window has zero duration".into()));
    }
    let offsets: Vec<f64> = (0..SCAN_POINTS)
        .map(|j| span * 10f64.powf(SCAN_DECADES * (j as f64 / (SCAN_POINTS - 1) as f64 - 1.0)))
        .collect();
    let costs: Vec<f64> = offsets.iter().map(|&d| residual(window, d)).collect();
    let (jb, cb) = costs
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (j, c)| if c < acc.1 { (j, c) } else { acc });
    if !cb.is_finite() {
        return Err(Error::Estimation("power-law fit is undefined on this window".into()));
    }
    if jb == SCAN_POINTS - 1 {
        return Err(Error::Estimation(
            "best singularity lies beyond the fit window (no finite-time blow-up signature)".into(),
        ));
    }
    let lo = offsets[jb.saturating_sub(1)].ln();
    let hi = offsets[jb + 1].ln();
    let (x, v) = golden_section_max(&|x: f64| -residual(window, x.exp()), lo, hi, 1e-12);
    let delta = if -v <= cb { x.exp() } else { offsets[jb] };
    Ok(t_last + delta)
}
