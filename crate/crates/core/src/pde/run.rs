use std::fmt;
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::geometry::{build_grid, DomainGeometry, MIN_RESOLUTION};
use crate::regime::{classify, flux_exponent, ProblemParams};

use super::datum::{prepare_datum, InitialDatum};
use super::estimate::fit_blowup_time;
use super::stepper::{step, Integrator};
use super::Field;

/// Blow-up needs the step to have shrunk below this fraction of the first step.
pub const DT_COLLAPSE_RATIO: f64 = 1e-10;
/// A sample is also taken whenever φ has grown by this factor since the last one.
pub const GROWTH_SAMPLE_FACTOR: f64 = 1.25;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Intervals per axis.
    pub resolution: usize,
    pub cfl_safety: f64,
    pub t_horizon: f64,
    pub blowup_sup_threshold: f64,
    pub blowup_phi_threshold: f64,
    pub dt_floor: f64,
    /// Steps between regular samples.
    pub output_stride: usize,
    pub integrator: Integrator,
    /// Step ceiling of the Chebyshev integrator; infinite means `t_horizon/100`.
    pub dt_max: f64,
    /// Overrides the regime's flux exponent β.
    pub flux_exponent: Option<f64>,
    pub max_steps: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            resolution: 64,
            cfl_safety: 0.9,
            t_horizon: 1.0,
            blowup_sup_threshold: 1e8,
            blowup_phi_threshold: 1e12,
            dt_floor: 1e-14,
            output_stride: 100,
            integrator: Integrator::Rk2,
            dt_max: f64::INFINITY,
            flux_exponent: None,
            max_steps: 200_000_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(format!("solver: {what}")));
        if self.resolution < MIN_RESOLUTION {
            return bad(&format!("resolution must be at least {MIN_RESOLUTION}"));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety < 1.0) {
            return bad("cfl_safety must lie in (0, 1)");
        }
        if !(self.t_horizon > 0.0 && self.t_horizon.is_finite()) {
            return bad("t_horizon must be positive and finite");
        }
        if !(self.blowup_sup_threshold > 0.0 && self.blowup_phi_threshold > 0.0 && self.dt_floor > 0.0) {
            return bad("thresholds and dt_floor must be positive");
        }
        if self.output_stride == 0 {
            return bad("output_stride must be at least 1");
        }
        if !(self.dt_max > 0.0) {
            return bad("dt_max must be positive");
        }
        if let Some(b) = self.flux_exponent {
            if !b.is_finite() {
                return bad("flux_exponent must be finite");
            }
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive");
        }
        Ok(())
    }

    pub(crate) fn effective_dt_max(&self) -> f64 {
        if self.dt_max.is_finite() {
            self.dt_max
        } else {
            self.t_horizon / 100.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub sup_u: f64,
    /// `∫u^{ms}`
    pub phi: f64,
    /// `∫u²`
    pub psi: f64,
    /// Size of the step that produced this state (0 for the initial state).
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    /// `uncertainty` is `None` when the power-law fit failed and
    /// `t_star_est` is the last sample time, a lower estimate.
    BlowUp { t_star_est: f64, uncertainty: Option<f64> },
    GlobalToHorizon,
    PositivityLost { time: f64 },
    DtFloorWithoutGrowth { time: f64 },
    StepLimit { time: f64 },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::BlowUp { .. } => "blowup",
            Verdict::GlobalToHorizon => "global-to-horizon",
            Verdict::PositivityLost { .. } => "positivity-lost",
            Verdict::DtFloorWithoutGrowth { .. } => "dt-floor-without-growth",
            Verdict::StepLimit { .. } => "step-limit",
        }
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self, Verdict::BlowUp { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::BlowUp { t_star_est, uncertainty: Some(u) } => {
                write!(f, "blowup at t* ~ {t_star_est:.9e} (+/- {u:.3e})")
            }
            Verdict::BlowUp { t_star_est, uncertainty: None } => {
                write!(f, "blowup after t = {t_star_est:.9e} (fit failed; lower estimate)")
            }
            Verdict::GlobalToHorizon => f.write_str("global-to-horizon"),
            Verdict::PositivityLost { time } => write!(f, "positivity-lost at t = {time:.9e}"),
            Verdict::DtFloorWithoutGrowth { time } => write!(f, "dt-floor-without-growth at t = {time:.9e}"),
            Verdict::StepLimit { time } => write!(f, "step-limit at t = {time:.9e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationSeries {
    pub samples: Vec<Sample>,
    pub verdict: Verdict,
    pub dimension: usize,
    /// Smallest grid spacing of the run.
    pub spacing: f64,
    pub resolution: usize,
    pub steps: u64,
    pub flux_exponent: f64,
}

impl SimulationSeries {
    pub fn last(&self) -> &Sample {
        &self.samples[self.samples.len() - 1]
    }

    pub fn t_star_est(&self) -> Option<f64> {
        match self.verdict {
            Verdict::BlowUp { t_star_est, .. } => Some(t_star_est),
            _ => None,
        }
    }

    /// Header plus one row per sample, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,sup_u,phi,psi,dt")?;
        for s in &self.samples {
            writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", s.t, s.sup_u, s.phi, s.psi, s.dt)?;
        }
        Ok(())
    }
}

/// β for the run: the configured override, the active regime's value, or
/// an arbitrary 1 when there is no flux (`k = 0`).
pub fn resolve_flux_exponent(
    params: &ProblemParams,
    geom: &DomainGeometry,
    config: &SolverConfig,
) -> Result<f64> {
    if let Some(beta) = config.flux_exponent {
        return Ok(beta);
    }
    if params.k == 0.0 {
        return Ok(1.0);
    }
    let verdict = classify(params, geom.dimension);
    flux_exponent(params, &verdict).map_err(|_| {
        Error::Config(format!(
            "no regime fixes the flux exponent ({}); set it explicitly",
            verdict
                .violated_conditions
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("; ")
        ))
    })
}

fn check_solver_params(params: &ProblemParams) -> Result<()> {
    let ProblemParams { a, b, c, k, m, p, q } = *params;
    for (name, v) in [("a", a), ("b", b), ("c", c), ("k", k)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::Config(format!("{name} must be finite and nonnegative, got {v}")));
        }
    }
    for (name, v) in [("m", m), ("p", p), ("q", q)] {
        if !(v >= 1.0 && v.is_finite()) {
            return Err(Error::Config(format!("{name} must be finite and at least 1, got {v}")));
        }
    }
    Ok(())
}

fn sample(field: &Field<'_>, ms: f64, dt: f64) -> Result<Sample> {
    Ok(Sample {
        t: field.time,
        sup_u: field.sup(),
        phi: field.moment(ms)?,
        psi: field.moment(2.0)?,
        dt,
    })
}

/// Integrates from the (projected) datum until the horizon, blow-up or failure.
pub fn run(
    datum: &InitialDatum,
    params: &ProblemParams,
    geom: &DomainGeometry,
    config: &SolverConfig,
) -> Result<SimulationSeries> {
    config.validate()?;
    check_solver_params(params)?;
    let beta = resolve_flux_exponent(params, geom, config)?;
    let grid = build_grid(geom, config.resolution)?;
    let values = prepare_datum(datum, params, beta, &grid)?;
    let mut field = Field::new(&grid, values, 0.0)?;
    let ms = params.ms();

    let mut samples = vec![sample(&field, ms, 0.0)?];
    let mut last_phi = samples[0].phi;
    let mut current = samples[0];
    let mut dt0: Option<f64> = None;
    let mut steps: u64 = 0;
    let exceeded = |s: &Sample| s.sup_u > config.blowup_sup_threshold || s.phi > config.blowup_phi_threshold;

    enum End {
        Horizon,
        BlowUp,
        Positivity(f64),
        DtFloor(f64),
        StepLimit(f64),
    }

    let end = loop {
        if field.time >= config.t_horizon {
            break End::Horizon;
        }
        if steps >= config.max_steps {
            break End::StepLimit(field.time);
        }
        let st = match step(&field, params, beta, config) {
            Ok(st) => st,
            Err(Error::Positivity { time, .. }) => {
                break if exceeded(&current) { End::BlowUp } else { End::Positivity(time) };
            }
            Err(Error::Numerical(_)) => {
                break if exceeded(&current) { End::BlowUp } else { End::DtFloor(field.time) };
            }
            Err(e) => return Err(e),
        };
        steps += 1;
        field = st.field;
        let first_dt = *dt0.get_or_insert(st.dt);
        let s = sample(&field, ms, st.dt)?;
        current = s;
        let blowup = exceeded(&s) && st.dt < DT_COLLAPSE_RATIO * first_dt;
        let at_end = field.time >= config.t_horizon;
        if steps.is_multiple_of(config.output_stride as u64) || s.phi >= GROWTH_SAMPLE_FACTOR * last_phi || blowup || at_end {
            samples.push(s);
            last_phi = s.phi;
        }
        if blowup {
            break End::BlowUp;
        }
    };

    if field.time > samples[samples.len() - 1].t {
        samples.push(current);
    }

    let verdict = match end {
        End::Horizon => Verdict::GlobalToHorizon,
        End::Positivity(time) => Verdict::PositivityLost { time },
        End::DtFloor(time) => Verdict::DtFloorWithoutGrowth { time },
        End::StepLimit(time) => Verdict::StepLimit { time },
        End::BlowUp => match fit_blowup_time(&samples) {
            Ok((t_star_est, u)) => Verdict::BlowUp { t_star_est, uncertainty: Some(u) },
            Err(_) => Verdict::BlowUp {
                t_star_est: samples[samples.len() - 1].t,
                uncertainty: None,
            },
        },
    };

    Ok(SimulationSeries {
        samples,
        verdict,
        dimension: geom.dimension,
        spacing: grid.min_spacing(),
        resolution: config.resolution,
        steps,
        flux_exponent: beta,
    })
}
