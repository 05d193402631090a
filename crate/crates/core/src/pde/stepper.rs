use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::SpatialGrid;
use crate::regime::ProblemParams;

use super::rhs::rhs_into;
use super::{check_positive, Field, SolverConfig, POSITIVITY_FLOOR};

/// Largest relative change of any nodal value allowed in one step.
pub const MAX_CHANGE: f64 = 0.2;
const CFL_EPS: f64 = 1e-12;
/// Damping of the Runge–Kutta–Chebyshev polynomials.
const RKC_DAMPING: f64 = 2.0 / 13.0;
const RKC_MAX_STAGES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Integrator {
    /// Explicit midpoint rule under the diffusive CFL restriction.
    #[default]
    Rk2,
    /// Second-order Runge–Kutta–Chebyshev with as many stages as the
    /// spectral radius needs; the step is limited by `dt_max` and accuracy only.
    Rkc,
}

impl Integrator {
    pub fn name(self) -> &'static str {
        match self {
            Integrator::Rk2 => "rk2",
            Integrator::Rkc => "rkc",
        }
    }
}

impl fmt::Display for Integrator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Integrator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rk2" | "midpoint" => Ok(Integrator::Rk2),
            "rkc" | "chebyshev" => Ok(Integrator::Rkc),
            other => Err(Error::Config(format!("unknown integrator '{other}' (expected rk2 or rkc)"))),
        }
    }
}

/// An accepted step.
#[derive(Debug, Clone)]
pub struct Step<'g> {
    pub field: Field<'g>,
    pub dt: f64,
    /// Right-hand-side evaluations used.
    pub stages: usize,
    /// Number of halvings before the step was accepted.
    pub retries: u32,
}

fn max_diffusivity(u: &[f64], m: f64) -> f64 {
    u.iter().map(|&v| m * v.powf(m - 1.0)).fold(0.0, f64::max)
}

/// Diffusive step limit `cfl·h²/(2N·max(m u^{m−1}) + ε)`.
pub fn cfl_dt(field: &Field<'_>, params: &ProblemParams, cfl_safety: f64) -> f64 {
    let h = field.grid.min_spacing();
    let n = field.grid.geometry.dimension as f64;
    cfl_safety * h * h / (2.0 * n * max_diffusivity(&field.values, params.m) + CFL_EPS)
}

/// Gershgorin bound on the spectral radius of the linearised operator.
pub fn spectral_radius(field: &Field<'_>, params: &ProblemParams) -> f64 {
    let h = field.grid.min_spacing();
    let n = field.grid.geometry.dimension as f64;
    let absorption = if params.b == 0.0 {
        0.0
    } else {
        field
            .values
            .iter()
            .map(|&v| params.b * params.q * v.powf(params.q - 1.0))
            .fold(0.0, f64::max)
    };
    4.0 * n * max_diffusivity(&field.values, params.m) / (h * h) + absorption
}

/// Stages needed for stability at step `dt` and spectral radius `rho` (at least 2).
pub fn rkc_stage_count(dt: f64, rho: f64) -> usize {
    let s = 1 + (1.0 + 1.54 * dt * rho).sqrt().floor() as usize;
    s.max(2)
}

fn change_cap(u: &[f64], f: &[f64]) -> f64 {
    u.iter()
        .zip(f)
        .filter(|(_, fi)| **fi != 0.0)
        .map(|(ui, fi)| MAX_CHANGE * ui / fi.abs())
        .fold(f64::INFINITY, f64::min)
}

fn positive(v: &[f64]) -> bool {
    v.iter().all(|x| *x > POSITIVITY_FLOOR && x.is_finite())
}

/// Advances `field` by one step of the configured integrator.
///
/// The step is the smallest of the integrator's stability limit, the 20%
/// change cap and the time left to the horizon. Steps that lose positivity
/// are retried at half the size down to `dt_floor`. A proposed step already
/// below `dt_floor` is a numerical error.
pub fn step<'g>(
    field: &Field<'g>,
    params: &ProblemParams,
    beta: f64,
    config: &SolverConfig,
) -> Result<Step<'g>> {
    check_positive(&field.values, field.time)?;
    let grid = field.grid;
    let mut f0 = vec![0.0; field.values.len()];
    rhs_into(grid, &field.values, params, beta, &mut f0)?;

    let remaining = config.t_horizon - field.time;
    let cap = change_cap(&field.values, &f0);
    let (mut dt, rho) = match config.integrator {
        Integrator::Rk2 => (cfl_dt(field, params, config.cfl_safety), 0.0),
        Integrator::Rkc => {
            let rho = spectral_radius(field, params);
            let stage_limit = ((RKC_MAX_STAGES - 1).pow(2) as f64 - 1.0) / (1.54 * rho);
            (config.effective_dt_max().min(stage_limit), rho)
        }
    };
    dt = dt.min(cap);
    let to_horizon = dt >= remaining;
    if to_horizon {
        dt = remaining;
    }
    if !(dt >= config.dt_floor) && !to_horizon {
        return Err(Error::Numerical(format!(
            "step size {dt:e} below the floor {:e} at t = {}",
            config.dt_floor, field.time
        )));
    }

    let mut retries = 0;
    loop {
        let attempt = match config.integrator {
            Integrator::Rk2 => rk2(grid, &field.values, &f0, params, beta, dt).map(|v| (v, 2)),
            Integrator::Rkc => {
                let s = rkc_stage_count(dt, rho);
                rkc(grid, &field.values, &f0, params, beta, dt, s).map(|v| (v, s))
            }
        };
        if let Some((values, stages)) = attempt {
            let time = if to_horizon && retries == 0 { config.t_horizon } else { field.time + dt };
            return Ok(Step {
                field: Field { grid, values, time },
                dt,
                stages,
                retries,
            });
        }
        dt *= 0.5;
        retries += 1;
        if dt < config.dt_floor {
            return Err(Error::Positivity {
                time: field.time,
                detail: format!("no step above dt_floor = {:e} keeps u positive", config.dt_floor),
            });
        }
    }
}

fn rk2(
    grid: &SpatialGrid,
    u: &[f64],
    f0: &[f64],
    params: &ProblemParams,
    beta: f64,
    dt: f64,
) -> Option<Vec<f64>> {
    let half: Vec<f64> = u.iter().zip(f0).map(|(a, f)| a + 0.5 * dt * f).collect();
    if !positive(&half) {
        return None;
    }
    let mut f1 = vec![0.0; u.len()];
    rhs_into(grid, &half, params, beta, &mut f1).ok()?;
    let next: Vec<f64> = u.iter().zip(&f1).map(|(a, f)| a + dt * f).collect();
    positive(&next).then_some(next)
}

#[allow(clippy::too_many_arguments)]
fn rkc(
    grid: &SpatialGrid,
    u: &[f64],
    f0: &[f64],
    params: &ProblemParams,
    beta: f64,
    dt: f64,
    s: usize,
) -> Option<Vec<f64>> {
    let w0 = 1.0 + RKC_DAMPING / (s * s) as f64;
    // Chebyshev T_j and derivatives at w0
    let mut t = vec![0.0; s + 1];
    let mut tp = vec![0.0; s + 1];
    let mut tpp = vec![0.0; s + 1];
    t[0] = 1.0;
    t[1] = w0;
    tp[1] = 1.0;
    for j in 2..=s {
        t[j] = 2.0 * w0 * t[j - 1] - t[j - 2];
        tp[j] = 2.0 * t[j - 1] + 2.0 * w0 * tp[j - 1] - tp[j - 2];
        tpp[j] = 4.0 * tp[j - 1] + 2.0 * w0 * tpp[j - 1] - tpp[j - 2];
    }
    let w1 = tp[s] / tpp[s];
    let mut b = vec![0.0; s + 1];
    for j in 2..=s {
        b[j] = tpp[j] / (tp[j] * tp[j]);
    }
    b[0] = b[2];
    b[1] = b[2];

    let n = u.len();
    let mut prev2 = u.to_vec();
    let mut prev: Vec<f64> = u.iter().zip(f0).map(|(a, f)| a + b[1] * w1 * dt * f).collect();
    let mut fj = vec![0.0; n];
    let mut next = vec![0.0; n];
    for j in 2..=s {
        if !positive(&prev) {
            return None;
        }
        rhs_into(grid, &prev, params, beta, &mut fj).ok()?;
        let mu = 2.0 * b[j] * w0 / b[j - 1];
        let nu = -b[j] / b[j - 2];
        let mu_t = 2.0 * b[j] * w1 / b[j - 1];
        let gamma_t = -(1.0 - b[j - 1] * t[j - 1]) * mu_t;
        for i in 0..n {
            next[i] = (1.0 - mu - nu) * u[i]
                + mu * prev[i]
                + nu * prev2[i]
                + mu_t * dt * fj[i]
                + gamma_t * dt * f0[i];
        }
        std::mem::swap(&mut prev2, &mut prev);
        std::mem::swap(&mut prev, &mut next);
    }
    positive(&prev).then_some(prev)
}
