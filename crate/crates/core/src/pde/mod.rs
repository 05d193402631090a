//! Method-of-lines solver for
//!
//! ```text
//! u_t = Δu^m + a∫_Ω u^p − b u^q − c|∇√u|²   in Ω × (0, t*)
//! u_ν = k u^β                                 on ∂Ω
//! ```
//!
//! The diffusion term is discretised in conservative finite-volume form on
//! the grids of [`crate::geometry`]: the flux through an interior face is
//! `A·(w_{i+1} − w_i)/h` with `w = u^m`, and the boundary face carries
//! `A·m u^{m−1} g(u)` (the chain rule turns the flux condition on `u` into
//! one on `u^m`). On the interval this is exactly the second-order ghost-node
//! scheme; with zero flux the weighted mass `Σ Wᵢ uᵢ` is conserved to
//! rounding.

mod datum;
mod estimate;
mod rhs;
mod run;
mod stepper;

pub use datum::{compatibility_residual, prepare_datum, InitialDatum, BLEND_FRACTION, COMPATIBILITY_TOL};
pub use estimate::{estimate_blowup_time, fit_blowup_time, MIN_FIT_SAMPLES, PHI_FIT_FLOOR};
pub use rhs::spatial_rhs;
pub use run::{
    resolve_flux_exponent, run, Sample, SimulationSeries, SolverConfig, Verdict, DT_COLLAPSE_RATIO,
    GROWTH_SAMPLE_FACTOR,
};
pub use stepper::{cfl_dt, rkc_stage_count, spectral_radius, step, Integrator, Step, MAX_CHANGE};

use crate::error::{Error, Result};
use crate::geometry::SpatialGrid;

/// Guards arithmetic underflow only; the solver never regularises `u` near zero.
pub const POSITIVITY_FLOOR: f64 = 1e-300;

/// Nodal values of `u` at one instant.
#[derive(Debug, Clone)]
pub struct Field<'g> {
    pub grid: &'g SpatialGrid,
    pub values: Vec<f64>,
    pub time: f64,
}

impl<'g> Field<'g> {
    pub fn new(grid: &'g SpatialGrid, values: Vec<f64>, time: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Precondition(format!(
                "field has {} values but grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        check_positive(&values, time)?;
        Ok(Field { grid, values, time })
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn inf(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `∫_Ω u^λ`.
    pub fn moment(&self, exponent: f64) -> Result<f64> {
        self.grid.integrate(&self.values, exponent)
    }
}

pub(crate) fn check_positive(values: &[f64], time: f64) -> Result<()> {
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > POSITIVITY_FLOOR && v.is_finite()))
    {
        return Err(Error::Positivity {
            time,
            detail: format!("u[{i}] = {v}"),
        });
    }
    Ok(())
}
