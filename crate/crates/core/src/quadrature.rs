//! Adaptive Simpson quadrature and a tail-bracketed improper integral.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;
/// Panel budget; bounds the work on integrands that never settle.
const MAX_PANELS: usize = 2_000_000;

/// Adaptive Simpson integration of `f` over `[a, b]` to the absolute
/// tolerance `tol` (Richardson-corrected panel sums).
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let mut failed = false;
    let mut budget = MAX_PANELS;
    let v = simpson_rec(f, a, fa, m, fm, b, fb, whole, tol, 0, &mut budget, &mut failed);
    if failed || !v.is_finite() {
        return Err(Error::Numerical(format!(
            "adaptive Simpson did not reach tolerance {tol:e} on [{a}, {b}]"
        )));
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut usize,
    failed: &mut bool,
) -> f64 {
    if *failed {
        return whole;
    }
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    if depth >= MAX_DEPTH || *budget == 0 {
        *failed = true;
        return left + right + delta / 15.0;
    }
    *budget -= 1;
    simpson_rec(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1, budget, failed)
        + simpson_rec(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1, budget, failed)
}

/// Value of `∫_{x0}^∞ f` with its tail bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImproperIntegral {
    /// Body plus the midpoint of the tail bracket.
    pub value: f64,
    /// Quadrature of `[x0, cutoff]`.
    pub body: f64,
    pub cutoff: f64,
    /// Analytic lower and upper bounds on `∫_{cutoff}^∞ f`.
    pub tail: (f64, f64),
}

/// Integrates `f` over `[x0, ∞)` via `τ = x0/σ`, `σ ∈ [x0/cutoff, 1]`.
///
/// `tail` maps the cutoff to an analytic bracket on the remainder. The
/// tolerance is absolute (`abs_tol`) but never looser than `rel_tol` times
/// a coarse estimate of the body, so integrals far below one are still
/// resolved.
pub fn improper_integral<F, T>(
    f: F,
    x0: f64,
    cutoff: f64,
    tail: T,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<ImproperIntegral>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> (f64, f64),
{
    if !(x0 > 0.0 && cutoff > x0) {
        return Err(Error::Precondition(format!(
            "improper integral needs 0 < x0 < cutoff, got x0 = {x0}, cutoff = {cutoff}"
        )));
    }
    let g = |sigma: f64| x0 / (sigma * sigma) * f(x0 / sigma);
    let lo = x0 / cutoff;
    let coarse = {
        let n = 64;
        let h = (1.0 - lo) / n as f64;
        (0..n).map(|i| g(lo + (i as f64 + 0.5) * h)).sum::<f64>() * h
    };
    let tol = abs_tol.min(rel_tol * coarse.abs()).max(f64::MIN_POSITIVE);
    let body = adaptive_simpson(&g, lo, 1.0, tol)?;
    let (tl, tu) = tail(cutoff);
    Ok(ImproperIntegral {
        value: body + 0.5 * (tl + tu),
        body,
        cutoff,
        tail: (tl, tu),
    })
}
