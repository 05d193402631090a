//! Numerical checks of the functional inequalities behind the bounds, and of
//! the differential inequality on simulated φ(t).
//!
//! For positive `V ∈ C¹(Ω̄)` and `λ ≥ 1`:
//!
//! ```text
//! trace:  ∫_∂Ω V^λ ≤ (N/ρ₀)∫V^λ + (dλ/ρ₀)∫V^{λ−1}|∇V|
//! N = 2:  ∫V^{3λ/2} ≤ √2/(2ρ₀)·[I^{3/2} + (d+ρ₀)/(2ε²)·I² + (d+ρ₀)ε²/2·G]
//! N = 3:  ∫V^{3λ/2} ≤ √2·[(3/(2ρ₀))^{3/2} I^{3/2} + (1+d/ρ₀)^{3/2}/(4ε³)·I³
//!                         + (3/4)(1+d/ρ₀)^{3/2} ε·G]
//! ```
//!
//! with `I = ∫V^λ` and `G = ∫|∇V^{λ/2}|²`. Both sides are evaluated with the
//! solver's quadrature and central-difference gradients at three
//! resolutions, so a negative margin that shrinks under refinement reads as
//! discretisation error rather than a violated inequality.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{BoundVariant, ConstantsLedger};
use crate::error::{Error, Result};
use crate::geometry::{build_grid, compute_geometry, DomainGeometry, DomainShape, GridLayout, SpatialGrid};
use crate::pde::SimulationSeries;

/// Relative accuracy of either side at resolution 128 for the seeded test
/// functions; measured drift between 128 and 512 stays below 5e-3.
pub const QUADRATURE_TOL: f64 = 1e-2;
/// One-sided relative slack of the envelope check.
pub const ENVELOPE_TOL: f64 = 0.05;
/// Coefficient of the `h²` discretisation allowance added to [`ENVELOPE_TOL`].
pub const ENVELOPE_H2_FACTOR: f64 = 10.0;
/// Bound on `Σ|a_k|` in random test functions.
pub const TRIG_AMPLITUDE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InequalityKind {
    BoundaryTrace,
    Interp2d,
    Interp3d,
}

impl InequalityKind {
    pub fn name(self) -> &'static str {
        match self {
            InequalityKind::BoundaryTrace => "boundary-trace",
            InequalityKind::Interp2d => "interp-2d",
            InequalityKind::Interp3d => "interp-3d",
        }
    }

    /// Dimension the inequality is stated in (`None`: any).
    pub fn dimension(self) -> Option<usize> {
        match self {
            InequalityKind::BoundaryTrace => None,
            InequalityKind::Interp2d => Some(2),
            InequalityKind::Interp3d => Some(3),
        }
    }
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "boundary-trace" | "trace" => Ok(InequalityKind::BoundaryTrace),
            "interp-2d" => Ok(InequalityKind::Interp2d),
            "interp-3d" => Ok(InequalityKind::Interp3d),
            other => Err(Error::Config(format!("unknown inequality '{other}'"))),
        }
    }
}

/// One term `a cos(ω r² + φ)` of a trigonometric mix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

/// Positive test functions of `r = |x − x₀|`.
#[derive(Debug, Clone, PartialEq)]
pub enum TestFunction {
    Constant(f64),
    /// `Σ_j c_j r^{2j}`
    RadialPolynomial(Vec<f64>),
    /// `exp(Σ a_k cos(ω_k r² + φ_k))`, generated from `seed`.
    TrigMix { seed: u64, terms: Vec<TrigTerm> },
}

impl TestFunction {
    /// A seeded mix of `count` terms with `Σ|a_k| ≤ 2` and `ω_k ∈ [0.5, 4]`.
    pub fn trig_mix(seed: u64, count: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut terms: Vec<TrigTerm> = (0..count.max(1))
            .map(|_| TrigTerm {
                amplitude: rng.gen_range(-1.0..1.0),
                frequency: rng.gen_range(0.5..4.0),
                phase: rng.gen_range(0.0..2.0 * PI),
            })
            .collect();
        let total: f64 = terms.iter().map(|t| t.amplitude.abs()).sum();
        let scale = TRIG_AMPLITUDE * rng.gen_range(0.25..1.0) / total.max(f64::MIN_POSITIVE);
        for t in &mut terms {
            t.amplitude *= scale;
        }
        TestFunction::TrigMix { seed, terms }
    }

    pub fn name(&self) -> String {
        match self {
            TestFunction::Constant(v) => format!("constant({v})"),
            TestFunction::RadialPolynomial(c) => format!("polynomial{c:?}"),
            TestFunction::TrigMix { seed, terms } => format!("trig-mix(seed={seed}, terms={})", terms.len()),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        let r2 = r * r;
        match self {
            TestFunction::Constant(v) => *v,
            TestFunction::RadialPolynomial(c) => c.iter().rev().fold(0.0, |acc, cj| acc * r2 + cj),
            TestFunction::TrigMix { terms, .. } => terms
                .iter()
                .map(|t| t.amplitude * (t.frequency * r2 + t.phase).cos())
                .sum::<f64>()
                .exp(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCase {
    pub kind: InequalityKind,
    pub lambda: f64,
    /// Required by the interpolation inequalities, ignored by the trace.
    pub epsilon: Option<f64>,
    pub test_function: TestFunction,
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub kind: InequalityKind,
    pub lambda: f64,
    pub epsilon: Option<f64>,
    pub resolution: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`
    pub margin: f64,
    /// `margin / max(|lhs|, |rhs|)`
    pub relative_margin: f64,
    /// Margins at 2× and 4× resolution.
    pub margin_refined: [f64; 2],
    pub relative_refined: [f64; 2],
}

impl InequalityReport {
    /// Smallest relative margin over the three resolutions.
    pub fn worst_relative(&self) -> f64 {
        self.relative_margin
            .min(self.relative_refined[0])
            .min(self.relative_refined[1])
    }
}

/// Gradient magnitude at each node: central differences inside, one-sided
/// second-order differences on the boundary, zero at a radial origin.
fn gradient_norm(grid: &SpatialGrid, v: &[f64]) -> Vec<f64> {
    fn axis_derivative(v: impl Fn(usize) -> f64, i: usize, n: usize, h: f64, symmetric_start: bool) -> f64 {
        if i == 0 {
            if symmetric_start {
                0.0
            } else {
                (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h)
            }
        } else if i == n - 1 {
            (3.0 * v(n - 1) - 4.0 * v(n - 2) + v(n - 3)) / (2.0 * h)
        } else {
            (v(i + 1) - v(i - 1)) / (2.0 * h)
        }
    }
    match grid.layout {
        GridLayout::Radial { .. } | GridLayout::Line => {
            let n = v.len();
            let h = grid.spacing[0];
            let radial = matches!(grid.layout, GridLayout::Radial { .. });
            (0..n)
                .map(|i| axis_derivative(|j| v[j], i, n, h, radial).abs())
                .collect()
        }
        GridLayout::Tensor { nx, ny } => {
            let (hx, hy) = (grid.spacing[0], grid.spacing[1]);
            (0..nx * ny)
                .map(|id| {
                    let (i, j) = (id % nx, id / nx);
                    let gx = axis_derivative(|k| v[j * nx + k], i, nx, hx, false);
                    let gy = axis_derivative(|k| v[k * nx + i], j, ny, hy, false);
                    gx.hypot(gy)
                })
                .collect()
        }
    }
}

fn sides(case: &InequalityCase, geom: &DomainGeometry, resolution: usize) -> Result<(f64, f64)> {
    let grid = build_grid(geom, resolution)?;
    let v = grid.map(|x| case.test_function.eval(x[0].hypot(x[1])));
    if let Some(bad) = v.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Domain(format!(
            "test function {} is not strictly positive (value {bad})",
            case.test_function.name()
        )));
    }
    let grad = gradient_norm(&grid, &v);
    let lambda = case.lambda;
    let (rho0, d) = (geom.rho0, geom.d);
    let n = geom.dimension as f64;
    let i_lambda = grid.integrate(&v, lambda)?;

    match case.kind {
        InequalityKind::BoundaryTrace => {
            let lhs = grid.integrate_boundary(&v, lambda)?;
            let weighted: Vec<f64> = v.iter().zip(&grad).map(|(vi, gi)| vi.powf(lambda - 1.0) * gi).collect();
            let rhs = n / rho0 * i_lambda + d * lambda / rho0 * grid.integrate(&weighted, 1.0)?;
            Ok((lhs, rhs))
        }
        kind => {
            let eps = case.epsilon.unwrap_or(f64::NAN);
            let lhs = grid.integrate(&v, 1.5 * lambda)?;
            // |∇V^{λ/2}|² = (λ/2)² V^{λ−2} |∇V|²
            let energy: Vec<f64> = v
                .iter()
                .zip(&grad)
                .map(|(vi, gi)| 0.25 * lambda * lambda * vi.powf(lambda - 2.0) * gi * gi)
                .collect();
            let g = grid.integrate(&energy, 1.0)?;
            let rhs = if kind == InequalityKind::Interp2d {
                SQRT_2 / (2.0 * rho0)
                    * (i_lambda.powf(1.5)
                        + (d + rho0) / (2.0 * eps * eps) * i_lambda * i_lambda
                        + (d + rho0) * eps * eps / 2.0 * g)
            } else {
                let shape = (1.0 + d / rho0).powf(1.5);
                SQRT_2
                    * ((1.5 / rho0).powf(1.5) * i_lambda.powf(1.5)
                        + shape / (4.0 * eps.powi(3)) * i_lambda.powi(3)
                        + 0.75 * shape * eps * g)
            };
            Ok((lhs, rhs))
        }
    }
}

fn relative(lhs: f64, rhs: f64) -> f64 {
    let scale = lhs.abs().max(rhs.abs());
    if scale == 0.0 {
        0.0
    } else {
        (rhs - lhs) / scale
    }
}

/// Evaluates both sides of the case at its resolution and at 2× and 4×.
pub fn check_inequality(case: &InequalityCase, geom: &DomainGeometry) -> Result<InequalityReport> {
    if !(case.lambda >= 1.0 && case.lambda.is_finite()) {
        return Err(Error::Precondition(format!("lambda must be at least 1, got {}", case.lambda)));
    }
    if let Some(dim) = case.kind.dimension() {
        if geom.dimension != dim {
            return Err(Error::Usage(format!(
                "{} needs a {dim}-dimensional domain, got a {}",
                case.kind, geom.shape.kind()
            )));
        }
        if !case.epsilon.is_some_and(|e| e > 0.0 && e.is_finite()) {
            return Err(Error::Precondition(format!("{} needs epsilon > 0", case.kind)));
        }
    }
    let (lhs, rhs) = sides(case, geom, case.resolution)?;
    let (l2, r2) = sides(case, geom, 2 * case.resolution)?;
    let (l4, r4) = sides(case, geom, 4 * case.resolution)?;
    let all = [lhs, rhs, l2, r2, l4, r4];
    if all.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(format!("non-finite integral in {} check", case.kind)));
    }
    Ok(InequalityReport {
        kind: case.kind,
        lambda: case.lambda,
        epsilon: case.epsilon.filter(|_| case.kind != InequalityKind::BoundaryTrace),
        resolution: case.resolution,
        lhs,
        rhs,
        margin: rhs - lhs,
        relative_margin: relative(lhs, rhs),
        margin_refined: [r2 - l2, r4 - l4],
        relative_refined: [relative(l2, r2), relative(l4, r4)],
    })
}

/// A case bound to its domain.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteCase {
    pub shape: DomainShape,
    pub case: InequalityCase,
}

pub const SUITE_LAMBDAS: [f64; 3] = [1.0, 2.0, 3.5];
pub const SUITE_EPSILONS: [f64; 3] = [0.5, 1.0, 2.0];

/// The seeded sweep: every (inequality, domain, λ, ε) combination with
/// `per_combination` random trig mixes, seeds `seed, seed + 1, …`.
/// The trace runs on the interval, disk, rectangle and ball; the planar
/// interpolation on the disk and rectangle; the spatial one on the ball.
pub fn standard_suite(seed: u64, resolution: usize, per_combination: usize) -> Vec<SuiteCase> {
    let interval = DomainShape::Interval { half_length: 2.0 };
    let disk = DomainShape::Disk { radius: 1.0 };
    let rectangle = DomainShape::Rectangle { half_x: 1.0, half_y: 2.0 };
    let ball = DomainShape::Ball { radius: 1.0 };

    let mut combos: Vec<(InequalityKind, DomainShape, f64, Option<f64>)> = Vec::new();
    for &lambda in &SUITE_LAMBDAS {
        for shape in [interval, disk, rectangle, ball] {
            combos.push((InequalityKind::BoundaryTrace, shape, lambda, None));
        }
        for &eps in &SUITE_EPSILONS {
            for shape in [disk, rectangle] {
                combos.push((InequalityKind::Interp2d, shape, lambda, Some(eps)));
            }
            combos.push((InequalityKind::Interp3d, ball, lambda, Some(eps)));
        }
    }
    let mut out = Vec::with_capacity(combos.len() * per_combination);
    let mut next_seed = seed;
    for (kind, shape, lambda, epsilon) in combos {
        for _ in 0..per_combination {
            out.push(SuiteCase {
                shape,
                case: InequalityCase {
                    kind,
                    lambda,
                    epsilon,
                    test_function: TestFunction::trig_mix(next_seed, 3),
                    resolution,
                },
            });
            next_seed = next_seed.wrapping_add(1);
        }
    }
    out
}

/// Runs suite cases concurrently; results keep the input order.
pub fn run_suite(cases: &[SuiteCase]) -> Vec<Result<InequalityReport>> {
    cases
        .par_iter()
        .map(|c| check_inequality(&c.case, &compute_geometry(c.shape)?))
        .collect()
}

/// Outcome of comparing the difference quotients of φ with the comparison ODE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeReport {
    pub holds: bool,
    /// Largest `Δφ/Δt ÷ (c₁φ + c₅φⁿ)` over sample pairs.
    pub worst_ratio: f64,
    /// Left time of the worst pair.
    pub worst_time: f64,
    /// Allowed excess over 1.
    pub tolerance: f64,
    pub pairs: usize,
}

/// Checks `(φ_{i+1} − φ_i)/(t_{i+1} − t_i) ≤ (c₁φ_i + c₅φ_iⁿ)(1 + tol)` with
/// `n = 3` for the spatial ledger, `n = 2` for the planar one, and
/// `tol = 0.05 + 10h²`.
pub fn check_phi_envelope(series: &SimulationSeries, ledger: &ConstantsLedger) -> Result<EnvelopeReport> {
    let l = ledger.blowup().ok_or_else(|| {
        Error::Usage("the envelope check needs a blow-up ledger, got the global ceiling".into())
    })?;
    let (dim, exponent) = match l.variant {
        BoundVariant::BlowUp3d => (3, 3),
        BoundVariant::BlowUp2d => (2, 2),
        BoundVariant::Global => unreachable!("blow-up ledgers carry blow-up variants"),
    };
    if series.dimension != dim {
        return Err(Error::Usage(format!(
            "{} ledger applied to a {}-dimensional run",
            l.variant, series.dimension
        )));
    }
    if series.samples.len() < 2 {
        return Err(Error::Precondition("the envelope check needs at least two samples".into()));
    }
    let tolerance = ENVELOPE_TOL + ENVELOPE_H2_FACTOR * series.spacing * series.spacing;
    let mut worst = (f64::NEG_INFINITY, series.samples[0].t);
    for w in series.samples.windows(2) {
        let (a, b) = (w[0], w[1]);
        let quotient = (b.phi - a.phi) / (b.t - a.t);
        let envelope = l.c1 * a.phi + l.c5 * a.phi.powi(exponent);
        let ratio = quotient / envelope;
        if ratio > worst.0 || ratio.is_nan() {
            worst = (ratio, a.t);
        }
    }
    Ok(EnvelopeReport {
        holds: worst.0 <= 1.0 + tolerance,
        worst_ratio: worst.0,
        worst_time: worst.1,
        tolerance,
        pairs: series.samples.len() - 1,
    })
}
