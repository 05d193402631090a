//! Domains, their star-shape scalars, and the grids the solver and the
//! inequality checks run on.
//!
//! Every shape is centred on its centroid, which serves as the star-shape
//! origin `x₀`. With that choice
//!
//! ```text
//! rho0 = min_{∂Ω} (x − x₀)·ν,   d = max_{Ω̄} |x − x₀|
//! ```
//!
//! are available in closed form. Disks and balls are discretised in radial
//! symmetry (a 1-D grid in `r` whose weights carry the Jacobian `r^{N−1}`);
//! the interval and rectangle use uniform Cartesian grids.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Smallest admissible grid resolution (number of intervals per axis).
pub const MIN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Interval,
    DiskRadial,
    BallRadial,
    Rectangle,
}

impl ShapeKind {
    pub fn dimension(self) -> usize {
        match self {
            ShapeKind::Interval => 1,
            ShapeKind::DiskRadial | ShapeKind::Rectangle => 2,
            ShapeKind::BallRadial => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Interval => "interval",
            ShapeKind::DiskRadial => "disk",
            ShapeKind::BallRadial => "ball",
            ShapeKind::Rectangle => "rectangle",
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "interval" => Ok(ShapeKind::Interval),
            "disk" | "disk-radial" => Ok(ShapeKind::DiskRadial),
            "ball" | "ball-radial" => Ok(ShapeKind::BallRadial),
            "rectangle" => Ok(ShapeKind::Rectangle),
            other => Err(Error::Config(format!(
                "unsupported shape kind `{other}` (expected interval, disk, ball or rectangle)"
            ))),
        }
    }
}

/// Shape descriptor. Extents are the half-length of the interval, the
/// radius of a disk or ball, or the two half-widths of a rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainShape {
    Interval { half_length: f64 },
    Disk { radius: f64 },
    Ball { radius: f64 },
    Rectangle { half_x: f64, half_y: f64 },
}

impl DomainShape {
    /// Builds a shape from a kind and its extents list.
    pub fn new(kind: ShapeKind, extents: &[f64]) -> Result<Self> {
        let want = if kind == ShapeKind::Rectangle { 2 } else { 1 };
        if extents.len() != want {
            return Err(Error::Config(format!(
                "{kind} expects {want} extent(s), got {}",
                extents.len()
            )));
        }
        let shape = match kind {
            ShapeKind::Interval => DomainShape::Interval { half_length: extents[0] },
            ShapeKind::DiskRadial => DomainShape::Disk { radius: extents[0] },
            ShapeKind::BallRadial => DomainShape::Ball { radius: extents[0] },
            ShapeKind::Rectangle => DomainShape::Rectangle {
                half_x: extents[0],
                half_y: extents[1],
            },
        };
        shape.validate()?;
        Ok(shape)
    }

    pub fn kind(&self) -> ShapeKind {
        match self {
            DomainShape::Interval { .. } => ShapeKind::Interval,
            DomainShape::Disk { .. } => ShapeKind::DiskRadial,
            DomainShape::Ball { .. } => ShapeKind::BallRadial,
            DomainShape::Rectangle { .. } => ShapeKind::Rectangle,
        }
    }

    pub fn extents(&self) -> Vec<f64> {
        match *self {
            DomainShape::Interval { half_length } => vec![half_length],
            DomainShape::Disk { radius } | DomainShape::Ball { radius } => vec![radius],
            DomainShape::Rectangle { half_x, half_y } => vec![half_x, half_y],
        }
    }

    pub fn dimension(&self) -> usize {
        self.kind().dimension()
    }

    /// The star-shape origin x₀ (the centroid, which is the coordinate origin).
    pub fn origin(&self) -> Vec<f64> {
        vec![0.0; self.dimension()]
    }

    pub fn validate(&self) -> Result<()> {
        for e in self.extents() {
            if !(e.is_finite() && e > 0.0) {
                return Err(Error::Config(format!(
                    "{} extents must be finite and strictly positive, got {e}",
                    self.kind()
                )));
            }
        }
        Ok(())
    }
}

/// A shape together with the scalars entering the bound constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainGeometry {
    pub shape: DomainShape,
    /// `min_{∂Ω} (x − x₀)·ν`
    pub rho0: f64,
    /// `max_{Ω̄} |x − x₀|`
    pub d: f64,
    /// |Ω|
    pub volume: f64,
    /// |∂Ω| (counting measure of the two endpoints for the interval)
    pub surface: f64,
    pub dimension: usize,
}

/// Closed-form geometry of a supported shape.
pub fn compute_geometry(shape: DomainShape) -> Result<DomainGeometry> {
    shape.validate()?;
    let (rho0, d, volume, surface) = match shape {
        DomainShape::Interval { half_length: l } => (l, l, 2.0 * l, 2.0),
        DomainShape::Disk { radius: r } => (r, r, PI * r * r, 2.0 * PI * r),
        DomainShape::Ball { radius: r } => (r, r, 4.0 * PI * r.powi(3) / 3.0, 4.0 * PI * r * r),
        DomainShape::Rectangle { half_x, half_y } => (
            half_x.min(half_y),
            half_x.hypot(half_y),
            4.0 * half_x * half_y,
            4.0 * (half_x + half_y),
        ),
    };
    Ok(DomainGeometry {
        shape,
        rho0,
        d,
        volume,
        surface,
        dimension: shape.dimension(),
    })
}

impl DomainGeometry {
    pub fn new(shape: DomainShape) -> Result<Self> {
        compute_geometry(shape)
    }
}

/// How grid nodes are arranged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridLayout {
    /// Nodes `r_i = i·h` on `[0, R]`; the origin is a symmetry point, `r = R` is the boundary.
    Radial { dimension: usize },
    /// Nodes on `[−L, L]`, both ends on the boundary.
    Line,
    /// Tensor grid on `[−Lx, Lx] × [−Ly, Ly]`, x index fastest.
    Tensor { nx: usize, ny: usize },
}

/// Nodes plus interior and boundary quadrature weights.
///
/// The interior weights are control-volume measures: on radial grids node
/// `i` owns the shell between `r_{i−1/2}` and `r_{i+1/2}` (clipped to
/// `[0, R]`), and on Cartesian axes the trapezoidal weights. Both sum to
/// |Ω| up to rounding and integrate smooth fields to second order.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    pub geometry: DomainGeometry,
    pub layout: GridLayout,
    /// Node coordinates per axis (one axis except for the rectangle).
    pub axes: Vec<Vec<f64>>,
    /// Uniform spacing per axis.
    pub spacing: Vec<f64>,
    pub cell_weights: Vec<f64>,
    pub boundary_weights: Vec<f64>,
    /// Area of the face between nodes `i` and `i + 1` (1-D layouts only).
    pub(crate) face_areas: Vec<f64>,
    /// Trapezoidal weights per axis (tensor layout only).
    pub(crate) axis_weights: Vec<Vec<f64>>,
}

fn uniform_axis(lo: f64, hi: f64, intervals: usize) -> Vec<f64> {
    let h = (hi - lo) / intervals as f64;
    (0..=intervals)
        .map(|i| if i == intervals { hi } else { lo + i as f64 * h })
        .collect()
}

fn trapezoid_weights(n_nodes: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n_nodes];
    w[0] = 0.5 * h;
    w[n_nodes - 1] = 0.5 * h;
    w
}

/// Builds a uniform grid with `resolution` intervals per axis.
#[allow(clippy::needless_range_loop)]
pub fn build_grid(geometry: &DomainGeometry, resolution: usize) -> Result<SpatialGrid> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::Config(format!(
            "grid resolution must be at least {MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let n = resolution;
    let grid = match geometry.shape {
        DomainShape::Disk { radius } | DomainShape::Ball { radius } => {
            let dim = geometry.dimension;
            let h = radius / n as f64;
            let nodes = uniform_axis(0.0, radius, n);
            // ω_N: circumference of the unit circle / area of the unit sphere
            let omega = if dim == 2 { 2.0 * PI } else { 4.0 * PI };
            let face = |i: usize| {
                if i == n {
                    radius
                } else {
                    (i as f64 + 0.5) * h
                }
            };
            let cell_weights = (0..=n)
                .map(|i| {
                    let outer = face(i);
                    let inner = if i == 0 { 0.0 } else { face(i - 1) };
                    omega / dim as f64 * (outer.powi(dim as i32) - inner.powi(dim as i32))
                })
                .collect();
            let face_areas = (0..n).map(|i| omega * face(i).powi(dim as i32 - 1)).collect();
            let mut boundary_weights = vec![0.0; n + 1];
            boundary_weights[n] = geometry.surface;
            SpatialGrid {
                geometry: *geometry,
                layout: GridLayout::Radial { dimension: dim },
                axes: vec![nodes],
                spacing: vec![h],
                cell_weights,
                boundary_weights,
                face_areas,
                axis_weights: Vec::new(),
            }
        }
        DomainShape::Interval { half_length } => {
            let h = 2.0 * half_length / n as f64;
            let mut boundary_weights = vec![0.0; n + 1];
            boundary_weights[0] = 1.0;
            boundary_weights[n] = 1.0;
            SpatialGrid {
                geometry: *geometry,
                layout: GridLayout::Line,
                axes: vec![uniform_axis(-half_length, half_length, n)],
                spacing: vec![h],
                cell_weights: trapezoid_weights(n + 1, h),
                boundary_weights,
                face_areas: vec![1.0; n],
                axis_weights: Vec::new(),
            }
        }
        DomainShape::Rectangle { half_x, half_y } => {
            let (hx, hy) = (2.0 * half_x / n as f64, 2.0 * half_y / n as f64);
            let (nx, ny) = (n + 1, n + 1);
            let wx = trapezoid_weights(nx, hx);
            let wy = trapezoid_weights(ny, hy);
            let mut cell_weights = Vec::with_capacity(nx * ny);
            let mut boundary_weights = Vec::with_capacity(nx * ny);
            for j in 0..ny {
                for i in 0..nx {
                    cell_weights.push(wx[i] * wy[j]);
                    let mut bw = 0.0;
                    if i == 0 || i == nx - 1 {
                        bw += wy[j];
                    }
                    if j == 0 || j == ny - 1 {
                        bw += wx[i];
                    }
                    boundary_weights.push(bw);
                }
            }
            SpatialGrid {
                geometry: *geometry,
                layout: GridLayout::Tensor { nx, ny },
                axes: vec![uniform_axis(-half_x, half_x, n), uniform_axis(-half_y, half_y, n)],
                spacing: vec![hx, hy],
                cell_weights,
                boundary_weights,
                face_areas: Vec::new(),
                axis_weights: vec![wx, wy],
            }
        }
    };
    Ok(grid)
}

impl SpatialGrid {
    pub fn new(geometry: &DomainGeometry, resolution: usize) -> Result<Self> {
        build_grid(geometry, resolution)
    }

    pub fn len(&self) -> usize {
        self.cell_weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cell_weights.is_empty()
    }

    /// Number of intervals per axis.
    pub fn resolution(&self) -> usize {
        self.axes[0].len() - 1
    }

    /// Smallest spacing over all axes.
    pub fn min_spacing(&self) -> f64 {
        self.spacing.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Coordinates of node `i`: `[r, 0]` on radial grids, `[x, 0]` on the
    /// interval, `[x, y]` on the rectangle.
    pub fn point(&self, i: usize) -> [f64; 2] {
        match self.layout {
            GridLayout::Radial { .. } | GridLayout::Line => [self.axes[0][i], 0.0],
            GridLayout::Tensor { nx, .. } => [self.axes[0][i % nx], self.axes[1][i / nx]],
        }
    }

    /// Evaluates `f` at every node.
    pub fn map<F: Fn([f64; 2]) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.len()).map(|i| f(self.point(i))).collect()
    }

    /// `Σ wᵢ vᵢ^λ` over the interior weights.
    pub fn integrate(&self, values: &[f64], exponent: f64) -> Result<f64> {
        weighted_power_sum(&self.cell_weights, values, exponent)
    }

    /// `Σ wᵢ vᵢ^λ` over the boundary weights.
    pub fn integrate_boundary(&self, values: &[f64], exponent: f64) -> Result<f64> {
        weighted_power_sum(&self.boundary_weights, values, exponent)
    }
}

/// `∫_Ω V^exponent` with the grid's interior quadrature.
pub fn integrate(grid: &SpatialGrid, values: &[f64], exponent: f64) -> Result<f64> {
    grid.integrate(values, exponent)
}

fn weighted_power_sum(weights: &[f64], values: &[f64], exponent: f64) -> Result<f64> {
    if values.len() != weights.len() {
        return Err(Error::Precondition(format!(
            "field has {} values but grid has {} nodes",
            values.len(),
            weights.len()
        )));
    }
    if !(exponent >= 0.0) {
        return Err(Error::Domain(format!("exponent must be nonnegative, got {exponent}")));
    }
    let integer = exponent.fract() == 0.0 && exponent <= i32::MAX as f64;
    let mut sum = 0.0;
    for (&w, &v) in weights.iter().zip(values) {
        if w == 0.0 {
            continue;
        }
        let term = if integer {
            v.powi(exponent as i32)
        } else if v < 0.0 {
            return Err(Error::Domain(format!(
                "negative field value {v} raised to non-integer exponent {exponent}"
            )));
        } else {
            v.powf(exponent)
        };
        sum += w * term;
    }
    Ok(sum)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn geom(kind: ShapeKind, ext: &[f64]) -> DomainGeometry {
        compute_geometry(DomainShape::new(kind, ext).unwrap()).unwrap()
    }

    #[test]
    fn closed_form_scalars() {
        let ball = geom(ShapeKind::BallRadial, &[1.0]);
        assert_eq!((ball.rho0, ball.d), (1.0, 1.0));
        assert_relative_eq!(ball.volume, 4.0 * PI / 3.0, max_relative = 1e-12);
        assert_relative_eq!(ball.surface, 4.0 * PI, max_relative = 1e-12);

        let line = geom(ShapeKind::Interval, &[2.0]);
        assert_eq!((line.rho0, line.d, line.volume, line.surface), (2.0, 2.0, 4.0, 2.0));
    }

    #[test]
    fn rectangle_support_function_matches_dense_boundary_sampling() {
        let (lx, ly) = (1.0_f64, 2.0_f64);
        let g = geom(ShapeKind::Rectangle, &[lx, ly]);
        // Walk the boundary; on each face (x − x₀)·ν is the face's distance.
        let mut rho = f64::INFINITY;
        let mut dist = 0.0_f64;
        let n = 4000;
        for i in 0..=n {
            let t = -1.0 + 2.0 * i as f64 / n as f64;
            for (x, y, nx, ny) in [
                (lx, t * ly, 1.0, 0.0),
                (-lx, t * ly, -1.0, 0.0),
                (t * lx, ly, 0.0, 1.0),
                (t * lx, -ly, 0.0, -1.0),
            ] {
                rho = rho.min(x * nx + y * ny);
                dist = dist.max(f64::hypot(x, y));
            }
        }
        assert_relative_eq!(g.rho0, rho, max_relative = 1e-12);
        assert_relative_eq!(g.d, dist, max_relative = 1e-12);
        assert_relative_eq!(g.d, 5f64.sqrt(), max_relative = 1e-12);
        assert_eq!((g.volume, g.surface), (8.0, 12.0));
    }

    #[test]
    fn bad_shapes_are_config_errors() {
        assert!(matches!("torus".parse::<ShapeKind>(), Err(Error::Config(_))));
        assert!(DomainShape::new(ShapeKind::BallRadial, &[0.0]).is_err());
        assert!(DomainShape::new(ShapeKind::Rectangle, &[1.0]).is_err());
        assert!(compute_geometry(DomainShape::Disk { radius: -1.0 }).is_err());
    }

    #[test]
    fn grid_weights_sum_to_measures() {
        let ball = geom(ShapeKind::BallRadial, &[1.0]);
        let g = build_grid(&ball, 128).unwrap();
        assert_eq!(g.len(), 129);
        let vol: f64 = g.cell_weights.iter().sum();
        assert_relative_eq!(vol, 4.0 * PI / 3.0, max_relative = 1e-10);

        let line = geom(ShapeKind::Interval, &[1.0]);
        let g = build_grid(&line, 16).unwrap();
        assert_relative_eq!(g.cell_weights.iter().sum::<f64>(), 2.0, max_relative = 1e-12);
        assert_eq!(g.cell_weights[0], g.cell_weights[16]);
        assert_eq!(g.cell_weights[1], 2.0 * g.cell_weights[0]);

        let disk = geom(ShapeKind::DiskRadial, &[2.0]);
        let g = build_grid(&disk, 64).unwrap();
        assert_relative_eq!(g.cell_weights.iter().sum::<f64>(), 4.0 * PI, max_relative = 1e-10);
        assert_relative_eq!(g.boundary_weights.iter().sum::<f64>(), 4.0 * PI, max_relative = 1e-10);

        let rect = geom(ShapeKind::Rectangle, &[1.0, 2.0]);
        let g = build_grid(&rect, 20).unwrap();
        assert_relative_eq!(g.cell_weights.iter().sum::<f64>(), 8.0, max_relative = 1e-10);
        assert_relative_eq!(g.boundary_weights.iter().sum::<f64>(), 12.0, max_relative = 1e-10);
    }

    #[test]
    fn resolution_floor() {
        let ball = geom(ShapeKind::BallRadial, &[1.0]);
        assert!(matches!(build_grid(&ball, 7), Err(Error::Config(_))));
        assert!(build_grid(&ball, 8).is_ok());
    }

    #[test]
    fn nodes_strictly_increasing() {
        let rect = geom(ShapeKind::Rectangle, &[1.0, 2.0]);
        let g = build_grid(&rect, 16).unwrap();
        for axis in &g.axes {
            assert!(axis.windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(g.point(17), [g.axes[0][0], g.axes[1][1]]);
    }

    #[test]
    fn radial_moments() {
        let ball = geom(ShapeKind::BallRadial, &[1.0]);
        let g = build_grid(&ball, 256).unwrap();
        let v = g.map(|p| p[0]);
        assert_relative_eq!(g.integrate(&v, 1.0).unwrap(), PI, max_relative = 1e-4);
        // ∫ 4π r² (1 + r²)² dr on [0, 1], frozen from a 30-digit quadrature
        let v = g.map(|p| 1.0 + p[0] * p[0]);
        assert_relative_eq!(g.integrate(&v, 2.0).unwrap(), 11.010534252581370588, max_relative = 1e-4);
    }

    #[test]
    fn integrate_rejects_negative_base_for_fractional_exponent() {
        let line = geom(ShapeKind::Interval, &[1.0]);
        let g = build_grid(&line, 8).unwrap();
        let mut v = vec![1.0; g.len()];
        v[3] = -0.5;
        assert!(matches!(g.integrate(&v, 1.5), Err(Error::Domain(_))));
        assert!(g.integrate(&v, 2.0).is_ok());
        assert!(matches!(g.integrate(&[1.0; 3], 1.0), Err(Error::Precondition(_))));
    }
}
