//! Scalar maximisation on a bracket: golden-section search backed by a
//! uniform grid scan.

use rayon::prelude::*;

/// 1/φ
const INV_GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
    /// Whether the grid samples were unimodal (so golden section ran on the whole bracket).
    pub unimodal: bool,
}

/// `n` equally spaced points spanning `[lo, hi]` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + i as f64 * h })
        .collect()
}

/// Golden-section maximisation of a unimodal `f` on `[lo, hi]` until the
/// bracket is narrower than `rel_width · max(|lo|, |hi|)`. Returns the best
/// point evaluated.
pub fn golden_section_max<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, rel_width: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let scale = lo.abs().max(hi.abs());
    let mut x1 = b - INV_GOLDEN * (b - a);
    let mut x2 = a + INV_GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for _ in 0..200 {
        if b - a <= rel_width * scale {
            break;
        }
        // ties shrink toward the smaller abscissa
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_GOLDEN * (b - a);
            f1 = f(x1);
            if f1 > best.1 || (f1 == best.1 && x1 < best.0) {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_GOLDEN * (b - a);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// True when the sequence rises (weakly) to a single peak and then falls.
/// Non-finite entries count as non-unimodal.
pub fn is_unimodal(values: &[f64]) -> bool {
    if values.iter().any(|v| !v.is_finite()) {
        return false;
    }
    let mut falling = false;
    for w in values.windows(2) {
        if w[1] > w[0] {
            if falling {
                return false;
            }
        } else if w[1] < w[0] {
            falling = true;
        }
    }
    true
}

/// Maximises `f` over `grid` and refines.
///
/// `f` returns `None` where the objective is undefined. If the defined
/// samples are unimodal and cover the whole grid, golden section runs over
/// the full bracket; otherwise it refines between the neighbours of the
/// best grid sample. The result is never worse than the best grid sample,
/// and ties go to the smaller abscissa.
pub fn maximize_on_grid<F>(f: &F, grid: &[f64], rel_width: f64) -> Option<Maximum>
where
    F: Fn(f64) -> Option<f64> + Sync,
{
    let samples: Vec<Option<f64>> = grid.par_iter().map(|&x| f(x)).collect();
    let mut best: Option<(usize, f64)> = None;
    for (i, s) in samples.iter().enumerate() {
        if let Some(v) = *s {
            if v.is_finite() && best.is_none_or(|(_, bv)| v > bv) {
                best = Some((i, v));
            }
        }
    }
    let (ib, vb) = best?;
    let defined: Vec<f64> = samples.iter().map(|s| s.unwrap_or(f64::NAN)).collect();
    let unimodal = is_unimodal(&defined);
    let objective = |x: f64| f(x).filter(|v| v.is_finite()).unwrap_or(f64::NEG_INFINITY);
    let (lo, hi) = if unimodal {
        (grid[0], grid[grid.len() - 1])
    } else {
        (grid[ib.saturating_sub(1)], grid[(ib + 1).min(grid.len() - 1)])
    };
    let (xg, vg) = golden_section_max(&objective, lo, hi, rel_width);
    let pick = if vg > vb { (xg, vg) } else { (grid[ib], vb) };
    Some(Maximum {
        x: pick.0,
        value: pick.1,
        unimodal,
    })
}
