use crate::error::{Error, Result};
use crate::geometry::{GridLayout, SpatialGrid};
use crate::regime::ProblemParams;

use super::{check_positive, Field};

/// Semi-discrete right-hand side of the equation at every node.
///
/// `beta` is the flux exponent in `g(u) = k u^β`.
pub fn spatial_rhs(field: &Field<'_>, params: &ProblemParams, beta: f64) -> Result<Vec<f64>> {
    check_positive(&field.values, field.time)?;
    let mut out = vec![0.0; field.values.len()];
    rhs_into(field.grid, &field.values, params, beta, &mut out)?;
    Ok(out)
}

/// As [`spatial_rhs`] on raw values, without the positivity check.
#[allow(clippy::needless_range_loop)]
pub(crate) fn rhs_into(
    grid: &SpatialGrid,
    u: &[f64],
    params: &ProblemParams,
    beta: f64,
    out: &mut [f64],
) -> Result<()> {
    let ProblemParams { a, b, c, k, m, p, q } = *params;
    let n = u.len();
    let w: Vec<f64> = u.iter().map(|&v| v.powf(m)).collect();
    // g(u) and the matching flux of u^m, m u^{m−1} g(u) = m k u^{m−1+β}
    let flux_u = |v: f64| if k == 0.0 { 0.0 } else { k * v.powf(beta) };
    let flux_w = |i: usize| if k == 0.0 { 0.0 } else { m * k * u[i].powf(m - 1.0 + beta) };

    let source = if a == 0.0 { 0.0 } else { a * grid.integrate(u, p)? };

    match grid.layout {
        GridLayout::Radial { .. } | GridLayout::Line => {
            let h = grid.spacing[0];
            let faces = &grid.face_areas;
            let radial = matches!(grid.layout, GridLayout::Radial { .. });
            for i in 0..n {
                let right = if i + 1 < n { faces[i] * (w[i + 1] - w[i]) / h } else { 0.0 };
                let left = if i > 0 { faces[i - 1] * (w[i] - w[i - 1]) / h } else { 0.0 };
                let bw = grid.boundary_weights[i];
                let boundary = if bw > 0.0 { bw * flux_w(i) } else { 0.0 };
                let diffusion = (right - left + boundary) / grid.cell_weights[i];

                let grad_sq = if bw > 0.0 {
                    flux_u(u[i]).powi(2)
                } else if radial && i == 0 {
                    0.0
                } else {
                    ((u[i + 1] - u[i - 1]) / (2.0 * h)).powi(2)
                };
                out[i] = diffusion + source - b * u[i].powf(q) - c * grad_sq / (4.0 * u[i]);
            }
        }
        GridLayout::Tensor { nx, ny } => {
            let (hx, hy) = (grid.spacing[0], grid.spacing[1]);
            let (wx, wy) = (&grid.axis_weights[0], &grid.axis_weights[1]);
            for j in 0..ny {
                for i in 0..nx {
                    let id = j * nx + i;
                    let x_edge = i == 0 || i == nx - 1;
                    let y_edge = j == 0 || j == ny - 1;
                    let bflux = if x_edge || y_edge { flux_w(id) } else { 0.0 };
                    let g2 = flux_u(u[id]).powi(2);

                    let east = if i + 1 < nx { (w[id + 1] - w[id]) / hx } else { 0.0 };
                    let west = if i > 0 { (w[id] - w[id - 1]) / hx } else { 0.0 };
                    let bx = if x_edge { bflux } else { 0.0 };
                    let dxx = (east - west + bx) / wx[i];

                    let north = if j + 1 < ny { (w[id + nx] - w[id]) / hy } else { 0.0 };
                    let south = if j > 0 { (w[id] - w[id - nx]) / hy } else { 0.0 };
                    let by = if y_edge { bflux } else { 0.0 };
                    let dyy = (north - south + by) / wy[j];

                    let gx2 = if x_edge { g2 } else { ((u[id + 1] - u[id - 1]) / (2.0 * hx)).powi(2) };
                    let gy2 = if y_edge { g2 } else { ((u[id + nx] - u[id - nx]) / (2.0 * hy)).powi(2) };

                    out[id] = dxx + dyy + source - b * u[id].powf(q) - c * (gx2 + gy2) / (4.0 * u[id]);
                }
            }
        }
    }
    if let Some(i) = out.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("non-finite right-hand side at node {i}")));
    }
    Ok(())
}
