use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{DomainGeometry, DomainShape, SpatialGrid};
use crate::regime::ProblemParams;

/// Largest admissible compatibility residual `|∂u₀/∂ν − g(u₀)|` on ∂Ω.
pub const COMPATIBILITY_TOL: f64 = 1e-8;
/// Width of the boundary blend used by the projection, as a fraction of the
/// distance from the origin to the boundary.
pub const BLEND_FRACTION: f64 = 0.25;

/// Initial data as profiles of `r = |x − x₀|`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialDatum {
    Constant { value: f64 },
    /// `offset + amplitude·exp(−r²/width²)`
    GaussianBump { offset: f64, amplitude: f64, width: f64 },
    /// `Σ_j c_j r^{2j}`
    PolynomialRadial { coefficients: Vec<f64> },
    /// Piecewise-linear interpolation of `(radii, values)`, constant beyond the last radius.
    CustomTable { radii: Vec<f64>, values: Vec<f64> },
}

impl InitialDatum {
    pub fn kind_name(&self) -> &'static str {
        match self {
            InitialDatum::Constant { .. } => "constant",
            InitialDatum::GaussianBump { .. } => "gaussian-bump",
            InitialDatum::PolynomialRadial { .. } => "polynomial-radial",
            InitialDatum::CustomTable { .. } => "custom-table",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            InitialDatum::Constant { value } if !(*value > 0.0 && value.is_finite()) => {
                Err(Error::Config(format!("constant datum must be positive, got {value}")))
            }
            InitialDatum::GaussianBump { offset, amplitude, width }
                if !(finite(&[*offset, *amplitude]) && *width > 0.0 && width.is_finite()) =>
            {
                Err(Error::Config("gaussian bump needs finite offset/amplitude and positive width".into()))
            }
            InitialDatum::PolynomialRadial { coefficients }
                if coefficients.is_empty() || !finite(coefficients) =>
            {
                Err(Error::Config("polynomial datum needs finite coefficients".into()))
            }
            InitialDatum::CustomTable { radii, values } => {
                if radii.is_empty() || radii.len() != values.len() {
                    return Err(Error::Config("custom table needs equally many radii and values".into()));
                }
                if radii[0] != 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) || !finite(radii) {
                    return Err(Error::Config(
                        "custom table radii must start at 0 and increase strictly".into(),
                    ));
                }
                if !values.iter().all(|v| *v > 0.0 && v.is_finite()) {
                    return Err(Error::Config("custom table values must be positive".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `u₀(r)`.
    pub fn profile(&self, r: f64) -> f64 {
        match self {
            InitialDatum::Constant { value } => *value,
            InitialDatum::GaussianBump { offset, amplitude, width } => {
                offset + amplitude * (-(r / width).powi(2)).exp()
            }
            InitialDatum::PolynomialRadial { coefficients } => {
                let r2 = r * r;
                coefficients.iter().rev().fold(0.0, |acc, c| acc * r2 + c)
            }
            InitialDatum::CustomTable { radii, values } => {
                let i = radii.partition_point(|&x| x <= r);
                if i == radii.len() {
                    return values[values.len() - 1];
                }
                let (r0, r1) = (radii[i - 1], radii[i]);
                values[i - 1] + (values[i] - values[i - 1]) * (r - r0) / (r1 - r0)
            }
        }
    }

    /// `u₀'(r)`; left derivative for the table.
    pub fn slope(&self, r: f64) -> f64 {
        match self {
            InitialDatum::Constant { .. } => 0.0,
            InitialDatum::GaussianBump { amplitude, width, .. } => {
                -2.0 * r / (width * width) * amplitude * (-(r / width).powi(2)).exp()
            }
            InitialDatum::PolynomialRadial { coefficients } => coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| 2.0 * j as f64 * c * r.powi(2 * j as i32 - 1))
                .sum(),
            InitialDatum::CustomTable { radii, values } => {
                let i = radii.partition_point(|&x| x < r);
                if i == 0 || i == radii.len() && r > radii[radii.len() - 1] {
                    return 0.0;
                }
                (values[i] - values[i - 1]) / (radii[i] - radii[i - 1])
            }
        }
    }
}

impl fmt::Display for InitialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind_name())
    }
}

/// Boundary distance of the shapes where the projection applies.
fn boundary_radius(shape: &DomainShape) -> Option<f64> {
    match *shape {
        DomainShape::Interval { half_length } => Some(half_length),
        DomainShape::Disk { radius } | DomainShape::Ball { radius } => Some(radius),
        DomainShape::Rectangle { .. } => None,
    }
}

/// C³ blend with `φ(r_b) = φ'(r_b) = φ''(r_b) = φ'''(r_b) = 0`, `φ(R) = 0`, `φ'(R) = 1`.
fn blend(r: f64, radius: f64) -> f64 {
    let rb = (1.0 - BLEND_FRACTION) * radius;
    if r <= rb {
        return 0.0;
    }
    let width = radius - rb;
    let xi = (r - rb) / width;
    width * xi.powi(4) * (xi - 1.0)
}

fn flux(params: &ProblemParams, beta: f64, v: f64) -> f64 {
    params.k * v.powf(beta)
}

/// Largest `|∂u₀/∂ν − k u₀^β|` over ∂Ω for the raw datum (sampled along
/// the edges of a rectangle).
pub fn compatibility_residual(
    datum: &InitialDatum,
    params: &ProblemParams,
    beta: f64,
    geom: &DomainGeometry,
) -> f64 {
    match geom.shape {
        DomainShape::Rectangle { half_x, half_y } => {
            let samples = 257;
            let mut worst: f64 = 0.0;
            for s in 0..samples {
                let t = -1.0 + 2.0 * s as f64 / (samples - 1) as f64;
                for (x, y, nx, ny) in [
                    (half_x, t * half_y, 1.0, 0.0),
                    (t * half_x, half_y, 0.0, 1.0),
                ] {
                    let r = x.hypot(y);
                    let dn = datum.slope(r) * (x * nx + y * ny) / r;
                    worst = worst.max((dn - flux(params, beta, datum.profile(r))).abs());
                }
            }
            worst
        }
        ref shape => {
            let radius = boundary_radius(shape).unwrap_or(0.0);
            (datum.slope(radius) - flux(params, beta, datum.profile(radius))).abs()
        }
    }
}

/// Nodal initial values, projected onto the compatibility condition.
///
/// On radial grids and the interval the datum is replaced by
/// `u₀ + δ·φ(r)` where `φ` is supported in the outer `BLEND_FRACTION` of
/// the radius and `δ = g(u₀(R)) − u₀'(R)`; the boundary value is untouched,
/// so the condition then holds exactly. Rectangle data are not projected
/// and must already be compatible.
pub fn prepare_datum(
    datum: &InitialDatum,
    params: &ProblemParams,
    beta: f64,
    grid: &SpatialGrid,
) -> Result<Vec<f64>> {
    datum.validate()?;
    let geom = &grid.geometry;
    let values = match boundary_radius(&geom.shape) {
        Some(radius) => {
            let delta = flux(params, beta, datum.profile(radius)) - datum.slope(radius);
            grid.map(|x| {
                let r = x[0].hypot(x[1]);
                datum.profile(r) + delta * blend(r, radius)
            })
        }
        None => {
            let residual = compatibility_residual(datum, params, beta, geom);
            if residual > COMPATIBILITY_TOL {
                return Err(Error::Config(format!(
                    "initial datum violates the boundary flux condition on the rectangle \
                     (residual {residual:.3e}); rectangle data are not projected"
                )));
            }
            grid.map(|x| datum.profile(x[0].hypot(x[1])))
        }
    };
    if let Some(v) = values.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Config(format!(
            "initial datum is not strictly positive after projection (value {v})"
        )));
    }
    Ok(values)
}
