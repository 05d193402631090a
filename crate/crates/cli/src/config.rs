//! Experiment configuration: a TOML file of flat `[section]` tables.
//!
//! ```toml
//! mode = "validate"
//! seed = 7
//!
//! [domain]
//! shape = "ball"
//! extents = [1.0]
//!
//! [params]
//! a = 1.0
//! b = 1.0
//! c = 1.0
//! k = 1.0
//! m = 2.5
//! p = 3.0
//! q = 2.0
//!
//! [initial]
//! kind = "gaussian-bump"
//! offset = 1.0
//! amplitude = 2.0
//! width = 0.5
//!
//! [solver]
//! resolution = 64
//! t_horizon = 1.0
//! ```

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use pmelab_core::geometry::compute_geometry;
use pmelab_core::{
    DomainGeometry, DomainShape, InitialDatum, Integrator, ProblemParams, ShapeKind, SolverConfig,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    BoundOnly,
    Simulate,
    Validate,
    InequalitySuite,
    Sweep,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::BoundOnly => "bound-only",
            Mode::Simulate => "simulate",
            Mode::Validate => "validate",
            Mode::InequalitySuite => "inequality-suite",
            Mode::Sweep => "sweep",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "bound-only" => Ok(Mode::BoundOnly),
            "simulate" => Ok(Mode::Simulate),
            "validate" => Ok(Mode::Validate),
            "inequality-suite" => Ok(Mode::InequalitySuite),
            "sweep" => Ok(Mode::Sweep),
            other => Err(CliError::Config(format!(
                "unknown mode `{other}` (expected bound-only, simulate, validate, inequality-suite or sweep)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub shape: String,
    pub extents: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k: f64,
    pub m: f64,
    pub p: f64,
    pub q: f64,
}

impl From<ParamsSection> for ProblemParams {
    fn from(s: ParamsSection) -> Self {
        ProblemParams::new(s.a, s.b, s.c, s.k, s.m, s.p, s.q)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialSection {
    Constant { value: f64 },
    GaussianBump { offset: f64, amplitude: f64, width: f64 },
    PolynomialRadial { coefficients: Vec<f64> },
    CustomTable { radii: Vec<f64>, values: Vec<f64> },
}

impl From<&InitialSection> for InitialDatum {
    fn from(s: &InitialSection) -> Self {
        match s.clone() {
            InitialSection::Constant { value } => InitialDatum::Constant { value },
            InitialSection::GaussianBump { offset, amplitude, width } => {
                InitialDatum::GaussianBump { offset, amplitude, width }
            }
            InitialSection::PolynomialRadial { coefficients } => {
                InitialDatum::PolynomialRadial { coefficients }
            }
            InitialSection::CustomTable { radii, values } => InitialDatum::CustomTable { radii, values },
        }
    }
}

/// Solver settings; every field is filled in on load so the echoed config
/// is the one actually used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub resolution: usize,
    pub cfl_safety: f64,
    pub t_horizon: f64,
    pub blowup_sup_threshold: f64,
    pub blowup_phi_threshold: f64,
    pub dt_floor: f64,
    pub output_stride: usize,
    pub integrator: String,
    /// Step ceiling; absent means `t_horizon / 100`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_max: Option<f64>,
    /// β override; absent means the active regime's value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux_exponent: Option<f64>,
    pub max_steps: u64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let d = SolverConfig::default();
        SolverSection {
            resolution: d.resolution,
            cfl_safety: d.cfl_safety,
            t_horizon: d.t_horizon,
            blowup_sup_threshold: d.blowup_sup_threshold,
            blowup_phi_threshold: d.blowup_phi_threshold,
            dt_floor: d.dt_floor,
            output_stride: d.output_stride,
            integrator: d.integrator.name().to_string(),
            dt_max: None,
            flux_exponent: d.flux_exponent,
            max_steps: d.max_steps,
        }
    }
}

impl SolverSection {
    pub fn to_solver_config(&self) -> CliResult<SolverConfig> {
        let integrator: Integrator = self.integrator.parse()?;
        let config = SolverConfig {
            resolution: self.resolution,
            cfl_safety: self.cfl_safety,
            t_horizon: self.t_horizon,
            blowup_sup_threshold: self.blowup_sup_threshold,
            blowup_phi_threshold: self.blowup_phi_threshold,
            dt_floor: self.dt_floor,
            output_stride: self.output_stride,
            integrator,
            dt_max: self.dt_max.unwrap_or(f64::INFINITY),
            flux_exponent: self.flux_exponent,
            max_steps: self.max_steps,
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSection {
    /// Fixed ε₁; absent means optimise over `(0, ε₁,max)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// One of a, b, c, k, m, p, q.
    pub parameter: String,
    /// Inclusive `[start, stop]`.
    pub range: [f64; 2],
    pub samples: usize,
    /// Mode of each sub-experiment.
    #[serde(default = "default_sweep_mode")]
    pub mode: Mode,
}

fn default_sweep_mode() -> Mode {
    Mode::BoundOnly
}

impl SweepSection {
    pub fn values(&self) -> Vec<f64> {
        let [lo, hi] = self.range;
        if self.samples == 1 {
            return vec![lo];
        }
        let h = (hi - lo) / (self.samples - 1) as f64;
        (0..self.samples)
            .map(|i| if i + 1 == self.samples { hi } else { lo + i as f64 * h })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InequalitySection {
    pub resolution: usize,
    /// Seeded test functions per (inequality, domain, λ, ε) combination.
    pub per_combination: usize,
}

impl Default for InequalitySection {
    fn default() -> Self {
        InequalitySection {
            resolution: 128,
            per_combination: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSection>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default)]
    pub inequality: InequalitySection,
}

/// The pieces a bound or simulation run needs, converted to core types.
#[derive(Debug, Clone)]
pub struct Problem {
    pub geometry: DomainGeometry,
    pub params: ProblemParams,
    pub datum: InitialDatum,
    pub solver: SolverConfig,
    pub eps1: Option<f64>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> CliResult<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// The resolved configuration as TOML; parsing it back yields `self`.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always representable as TOML")
    }

    /// Checks that the sections the mode needs are present and finite.
    pub fn validate(&self) -> CliResult<()> {
        let need = |present: bool, section: &str| {
            if present {
                Ok(())
            } else {
                Err(CliError::Config(format!("mode `{}` needs a [{section}] section", self.mode)))
            }
        };
        let mode = match self.mode {
            Mode::Sweep => {
                let sweep = self
                    .sweep
                    .as_ref()
                    .ok_or_else(|| CliError::Config("mode `sweep` needs a [sweep] section".into()))?;
                check_sweep(sweep)?;
                sweep.mode
            }
            m => m,
        };
        match mode {
            Mode::InequalitySuite => {
                let s = self.inequality;
                if s.per_combination == 0 {
                    return Err(CliError::Config("inequality.per_combination must be at least 1".into()));
                }
                if s.resolution < pmelab_core::geometry::MIN_RESOLUTION {
                    return Err(CliError::Config(format!(
                        "inequality.resolution must be at least {}",
                        pmelab_core::geometry::MIN_RESOLUTION
                    )));
                }
            }
            _ => {
                need(self.domain.is_some(), "domain")?;
                need(self.params.is_some(), "params")?;
                need(self.initial.is_some(), "initial")?;
                self.problem()?;
            }
        }
        Ok(())
    }

    /// Converts the domain, parameter, datum and solver sections.
    pub fn problem(&self) -> CliResult<Problem> {
        let missing = |s: &str| CliError::Config(format!("missing [{s}] section"));
        let domain = self.domain.as_ref().ok_or_else(|| missing("domain"))?;
        let kind: ShapeKind = domain.shape.parse()?;
        let geometry = compute_geometry(DomainShape::new(kind, &domain.extents)?)?;
        let p = self.params.ok_or_else(|| missing("params"))?;
        for (name, v) in [("a", p.a), ("b", p.b), ("c", p.c), ("k", p.k), ("m", p.m), ("p", p.p), ("q", p.q)] {
            if !v.is_finite() {
                return Err(CliError::Config(format!("params.{name} must be finite, got {v}")));
            }
        }
        let datum = InitialDatum::from(self.initial.as_ref().ok_or_else(|| missing("initial"))?);
        datum.validate()?;
        let solver = self.solver.to_solver_config()?;
        let eps1 = self.bounds.and_then(|b| b.eps1);
        if let Some(e) = eps1 {
            if !(e.is_finite() && e > 0.0) {
                return Err(CliError::Config(format!("bounds.eps1 must be positive, got {e}")));
            }
        }
        Ok(Problem {
            geometry,
            params: p.into(),
            datum,
            solver,
            eps1,
        })
    }

    /// A copy with one parameter replaced and the mode set to the sweep's sub-mode.
    pub fn sweep_instance(&self, value: f64) -> CliResult<ExperimentConfig> {
        let sweep = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [sweep] section".into()))?;
        let mut out = self.clone();
        out.mode = sweep.mode;
        out.sweep = None;
        let params = out
            .params
            .as_mut()
            .ok_or_else(|| CliError::Config("sweep needs a [params] section".into()))?;
        *param_slot(params, &sweep.parameter)? = value;
        Ok(out)
    }
}

fn param_slot<'a>(params: &'a mut ParamsSection, name: &str) -> CliResult<&'a mut f64> {
    Ok(match name {
        "a" => &mut params.a,
        "b" => &mut params.b,
        "c" => &mut params.c,
        "k" => &mut params.k,
        "m" => &mut params.m,
        "p" => &mut params.p,
        "q" => &mut params.q,
        other => {
            return Err(CliError::Config(format!(
                "sweep.parameter `{other}` is not one of a, b, c, k, m, p, q"
            )))
        }
    })
}

fn check_sweep(sweep: &SweepSection) -> CliResult<()> {
    if sweep.mode == Mode::Sweep || sweep.mode == Mode::InequalitySuite {
        return Err(CliError::Config(format!(
            "sweep.mode must be bound-only, simulate or validate, got {}",
            sweep.mode
        )));
    }
    if sweep.samples == 0 {
        return Err(CliError::Config("sweep.samples must be at least 1".into()));
    }
    if !sweep.range.iter().all(|v| v.is_finite()) {
        return Err(CliError::Config("sweep.range must be finite".into()));
    }
    param_slot(&mut ParamsSection { a: 0.0, b: 0.0, c: 0.0, k: 0.0, m: 0.0, p: 0.0, q: 0.0 }, &sweep.parameter)?;
    Ok(())
}
