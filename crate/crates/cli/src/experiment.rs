//! Runs one configured experiment and writes its artifacts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use pmelab_core::bounds::{
    constants_2d, constants_3d, global_ceiling, lower_bound_2d, lower_bound_2d_quadrature,
    lower_bound_3d, lower_bound_3d_quadrature, optimize_eps1,
};
use pmelab_core::geometry::build_grid;
use pmelab_core::pde::{prepare_datum, resolve_flux_exponent, run};
use pmelab_core::regime::classify;
use pmelab_core::verify::{check_phi_envelope, run_suite, standard_suite, QUADRATURE_TOL};
use pmelab_core::{BoundResult, BoundVariant, Field, RegimeVerdict, SimulationSeries};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Mode, Problem};
use crate::error::{CliError, CliResult};
use crate::output::{bounds_csv, envelope_csv, inequalities_csv, real};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATED: i32 = 2;

/// Result of a completed experiment.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: i32,
    pub dir: PathBuf,
    /// Contents of report.txt.
    pub report: String,
    /// Primary bound value (T or C) when one applies.
    pub bound: Option<f64>,
    pub t_star_est: Option<f64>,
}

/// What a mode hands back besides its files.
struct ModeResult {
    status: i32,
    report: String,
    bound: Option<f64>,
    t_star_est: Option<f64>,
}

impl ModeResult {
    fn new(status: i32, report: String) -> Self {
        ModeResult { status, report, bound: None, t_star_est: None }
    }
}

/// Creates `<base>/<timestamp>-<mode>` (suffixed when taken) and runs the
/// experiment in it.
pub fn run_experiment(config: &ExperimentConfig, base: &Path) -> CliResult<Outcome> {
    let dir = fresh_dir(base, config.mode)?;
    run_in_dir(config, &dir)
}

fn fresh_dir(base: &Path, mode: Mode) -> CliResult<PathBuf> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(base).map_err(io(base))?;
    let stamp = chrono::Local::now().format("%Y%m%d-%H%M%S");
    for n in 0.. {
        let name = if n == 0 {
            format!("{stamp}-{mode}")
        } else {
            format!("{stamp}-{mode}-{n}")
        };
        let dir = base.join(name);
        match fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => return Err(io(&dir)(e)),
        }
    }
    unreachable!()
}

fn write(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| CliError::Io { path, source })
}

/// Runs the experiment into an existing directory.
pub fn run_in_dir(config: &ExperimentConfig, dir: &Path) -> CliResult<Outcome> {
    config.validate()?;
    write(dir, "config.toml", &config.to_toml())?;
    let r = match config.mode {
        Mode::BoundOnly => bound_only(config, dir),
        Mode::Simulate => simulate(config, dir),
        Mode::Validate => validate(config, dir),
        Mode::InequalitySuite => inequality_suite(config, dir),
        Mode::Sweep => sweep(config, dir),
    };
    let r = match r {
        Ok(r) => r,
        Err(e) => {
            write(dir, "report.txt", &format!("mode: {}\nerror: {e}\n", config.mode))?;
            return Err(e);
        }
    };
    write(dir, "report.txt", &r.report)?;
    Ok(Outcome {
        status: r.status,
        dir: dir.to_path_buf(),
        report: r.report,
        bound: r.bound,
        t_star_est: r.t_star_est,
    })
}

fn regime_lines(report: &mut String, problem: &Problem, verdict: &RegimeVerdict) {
    let p = problem.params;
    let _ = writeln!(
        report,
        "domain: {} {:?} (rho0 = {}, d = {}, volume = {}, surface = {})",
        problem.geometry.shape.kind(),
        problem.geometry.shape.extents(),
        real(problem.geometry.rho0),
        real(problem.geometry.d),
        real(problem.geometry.volume),
        real(problem.geometry.surface)
    );
    let _ = writeln!(
        report,
        "params: a = {}, b = {}, c = {}, k = {}, m = {}, p = {}, q = {}",
        p.a, p.b, p.c, p.k, p.m, p.p, p.q
    );
    let _ = writeln!(report, "regime: {}", verdict.label());
    for c in &verdict.violated_conditions {
        let _ = writeln!(report, "  violated: {c}");
    }
}

fn require_covered(verdict: &RegimeVerdict) -> CliResult<()> {
    if verdict.any() {
        Ok(())
    } else {
        let why: Vec<String> = verdict.violated_conditions.iter().map(|c| c.to_string()).collect();
        Err(CliError::NotCovered(why.join("; ")))
    }
}

/// φ₀ = ∫u₀^{ms} and ψ₀ = ∫u₀² of the datum exactly as the solver sees it.
fn initial_moments(problem: &Problem) -> CliResult<(f64, f64)> {
    let beta = resolve_flux_exponent(&problem.params, &problem.geometry, &problem.solver)?;
    let grid = build_grid(&problem.geometry, problem.solver.resolution)?;
    let values = prepare_datum(&problem.datum, &problem.params, beta, &grid)?;
    let field = Field::new(&grid, values, 0.0)?;
    Ok((field.moment(problem.params.ms())?, field.moment(2.0)?))
}

/// Every bound applicable to the regime: the closed form first, then the
/// quadrature variant on the same ledger.
pub fn applicable_bounds(problem: &Problem, verdict: &RegimeVerdict) -> CliResult<Vec<BoundResult>> {
    let (phi0, psi0) = initial_moments(problem)?;
    let (params, geom) = (&problem.params, &problem.geometry);
    let out = if verdict.blowup_bound_3d {
        let closed = match problem.eps1 {
            Some(e) => lower_bound_3d(&constants_3d(params, geom, e)?, phi0)?,
            None => optimize_eps1(params, geom, phi0, BoundVariant::BlowUp3d)?,
        };
        let ledger = *closed.ledger.blowup().expect("blow-up ledger");
        vec![closed, lower_bound_3d_quadrature(&ledger, phi0)?]
    } else if verdict.blowup_bound_2d {
        let closed = match problem.eps1 {
            Some(e) => lower_bound_2d(&constants_2d(params, geom, e)?, phi0)?,
            None => optimize_eps1(params, geom, phi0, BoundVariant::BlowUp2d)?,
        };
        let ledger = *closed.ledger.blowup().expect("blow-up ledger");
        vec![closed, lower_bound_2d_quadrature(&ledger, phi0)?]
    } else if verdict.global_existence {
        vec![global_ceiling(params, geom, psi0)?]
    } else {
        Vec::new()
    };
    Ok(out)
}

fn bound_lines(report: &mut String, bounds: &[BoundResult]) {
    for b in bounds {
        let label = if b.ledger.variant() == BoundVariant::Global { "C" } else { "T" };
        let _ = writeln!(
            report,
            "bound {} [{}]: {label} = {} (initial functional {})",
            b.ledger.variant(),
            b.formula.name(),
            real(b.value),
            real(b.phi0)
        );
    }
}

fn series_lines(report: &mut String, series: &SimulationSeries) {
    let _ = writeln!(
        report,
        "simulation: {} steps, {} samples, resolution {}, flux exponent {}",
        series.steps,
        series.samples.len(),
        series.resolution,
        series.flux_exponent
    );
    let _ = writeln!(report, "verdict: {}", series.verdict);
    match series.t_star_est() {
        Some(t) => {
            let _ = writeln!(report, "t_star_est: {}", real(t));
        }
        None => {
            let _ = writeln!(report, "t_star_est: none");
        }
    }
}

fn write_series(dir: &Path, series: &SimulationSeries) -> CliResult<()> {
    let mut buf = Vec::new();
    series.write_csv(&mut buf).map_err(|source| CliError::Io {
        path: dir.join("series.csv"),
        source,
    })?;
    write(dir, "series.csv", &String::from_utf8(buf).expect("ascii output"))
}

fn bound_only(config: &ExperimentConfig, dir: &Path) -> CliResult<ModeResult> {
    let problem = config.problem()?;
    let verdict = classify(&problem.params, problem.geometry.dimension);
    require_covered(&verdict)?;
    let bounds = applicable_bounds(&problem, &verdict)?;
    write(dir, "bounds.csv", &bounds_csv(&bounds))?;
    let mut report = format!("mode: {}\n", config.mode);
    regime_lines(&mut report, &problem, &verdict);
    bound_lines(&mut report, &bounds);
    Ok(ModeResult { bound: bounds.first().map(|b| b.value), ..ModeResult::new(EXIT_OK, report) })
}

fn simulate(config: &ExperimentConfig, dir: &Path) -> CliResult<ModeResult> {
    let problem = config.problem()?;
    let verdict = classify(&problem.params, problem.geometry.dimension);
    let mut report = format!("mode: {}\n", config.mode);
    regime_lines(&mut report, &problem, &verdict);
    let mut bound = None;
    if verdict.any() {
        let bounds = applicable_bounds(&problem, &verdict)?;
        write(dir, "bounds.csv", &bounds_csv(&bounds))?;
        bound_lines(&mut report, &bounds);
        bound = bounds.first().map(|b| b.value);
    }
    let series = run(&problem.datum, &problem.params, &problem.geometry, &problem.solver)?;
    write_series(dir, &series)?;
    series_lines(&mut report, &series);
    Ok(ModeResult { bound, t_star_est: series.t_star_est(), ..ModeResult::new(EXIT_OK, report) })
}

fn validate(config: &ExperimentConfig, dir: &Path) -> CliResult<ModeResult> {
    let problem = config.problem()?;
    let verdict = classify(&problem.params, problem.geometry.dimension);
    require_covered(&verdict)?;
    let bounds = applicable_bounds(&problem, &verdict)?;
    write(dir, "bounds.csv", &bounds_csv(&bounds))?;
    let series = run(&problem.datum, &problem.params, &problem.geometry, &problem.solver)?;
    write_series(dir, &series)?;

    let mut report = format!("mode: {}\n", config.mode);
    regime_lines(&mut report, &problem, &verdict);
    bound_lines(&mut report, &bounds);
    series_lines(&mut report, &series);

    let primary = &bounds[0];
    let mut violated = false;
    if verdict.blowup() {
        match series.t_star_est() {
            Some(t) => {
                let holds = t >= primary.value;
                violated |= !holds;
                let _ = writeln!(
                    report,
                    "bound holds: {} (t_star_est = {} vs T = {})",
                    if holds { "yes" } else { "no" },
                    real(t),
                    real(primary.value)
                );
            }
            None => {
                let _ = writeln!(
                    report,
                    "bound holds: untestable (no blow-up observed; verdict {})",
                    series.verdict.name()
                );
            }
        }
        let envelope = check_phi_envelope(&series, &primary.ledger)?;
        write(dir, "inequalities.csv", &envelope_csv(&envelope))?;
        violated |= !envelope.holds;
        let _ = writeln!(
            report,
            "envelope holds: {} (worst ratio {} at t = {}, allowed 1 + {}, {} pairs)",
            if envelope.holds { "yes" } else { "no" },
            real(envelope.worst_ratio),
            real(envelope.worst_time),
            real(envelope.tolerance),
            envelope.pairs
        );
    } else {
        let ceiling = primary.value;
        let worst = series
            .samples
            .iter()
            .max_by(|a, b| a.psi.total_cmp(&b.psi))
            .expect("series has samples");
        let holds = series.samples.iter().all(|s| s.psi <= ceiling);
        violated |= !holds;
        let _ = writeln!(
            report,
            "ceiling holds: {} (max psi = {} at t = {} vs C = {})",
            if holds { "yes" } else { "no" },
            real(worst.psi),
            real(worst.t),
            real(ceiling)
        );
    }
    let status = if violated { EXIT_VIOLATED } else { EXIT_OK };
    Ok(ModeResult {
        bound: Some(primary.value),
        t_star_est: series.t_star_est(),
        ..ModeResult::new(status, report)
    })
}

/// Pass criterion of a suite case: the worst relative margin over the
/// resolution ladder is at least `−10 × QUADRATURE_TOL`.
pub fn suite_case_passes(r: &pmelab_core::InequalityReport) -> bool {
    r.worst_relative() >= -10.0 * QUADRATURE_TOL
}

fn inequality_suite(config: &ExperimentConfig, dir: &Path) -> CliResult<ModeResult> {
    let s = config.inequality;
    let cases = standard_suite(config.seed, s.resolution, s.per_combination);
    let reports = run_suite(&cases).into_iter().collect::<Result<Vec<_>, _>>()?;
    write(dir, "inequalities.csv", &inequalities_csv(&cases, &reports, suite_case_passes))?;
    let passed = reports.iter().filter(|r| suite_case_passes(r)).count();
    let worst = reports
        .iter()
        .map(|r| r.worst_relative())
        .fold(f64::INFINITY, f64::min);
    let mut report = format!("mode: {}\nseed: {}\n", config.mode, config.seed);
    let _ = writeln!(
        report,
        "cases: {}, passed: {passed}, failed: {}",
        reports.len(),
        reports.len() - passed
    );
    let _ = writeln!(report, "worst relative margin: {}", real(worst));
    let _ = writeln!(report, "threshold: {}", real(-10.0 * QUADRATURE_TOL));
    let status = if passed == reports.len() { EXIT_OK } else { EXIT_VIOLATED };
    Ok(ModeResult::new(status, report))
}

/// One sweep sample as recorded in sweep.csv.
#[derive(Debug, Clone)]
struct SweepRow {
    value: f64,
    status: i32,
    bound: Option<f64>,
    t_star: Option<f64>,
    note: String,
}

fn sweep(config: &ExperimentConfig, dir: &Path) -> CliResult<ModeResult> {
    let sweep = config.sweep.as_ref().expect("validated sweep section");
    let values = sweep.values();
    let instances = values
        .iter()
        .map(|&v| config.sweep_instance(v))
        .collect::<CliResult<Vec<_>>>()?;
    let rows: Vec<SweepRow> = instances
        .par_iter()
        .zip(values.par_iter())
        .enumerate()
        .map(|(i, (sub, &value))| {
            let subdir = dir.join(format!("{i:03}"));
            let run = fs::create_dir(&subdir)
                .map_err(|source| CliError::Io { path: subdir.clone(), source })
                .and_then(|_| run_in_dir(sub, &subdir));
            match run {
                Ok(o) => SweepRow {
                    value,
                    status: o.status,
                    bound: o.bound,
                    t_star: o.t_star_est,
                    note: String::new(),
                },
                Err(e) => {
                    let _ = fs::write(subdir.join("error.txt"), format!("{e}\n"));
                    SweepRow { value, status: EXIT_ERROR, bound: None, t_star: None, note: e.to_string() }
                }
            }
        })
        .collect();

    let mut csv = String::from("index,parameter,value,status,bound,t_star_est,note\n");
    for (i, r) in rows.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{i},{},{},{},{},{},\"{}\"",
            sweep.parameter,
            real(r.value),
            r.status,
            r.bound.map(real).unwrap_or_default(),
            r.t_star.map(real).unwrap_or_default(),
            r.note.replace('"', "'")
        );
    }
    write(dir, "sweep.csv", &csv)?;

    let bounds: Vec<f64> = rows.iter().filter_map(|r| r.bound).collect();
    let monotone = bounds.windows(2).all(|w| w[1] >= w[0]);
    let mut report = format!(
        "mode: sweep over {} in [{}, {}], {} samples, sub-mode {}\n",
        sweep.parameter, sweep.range[0], sweep.range[1], sweep.samples, sweep.mode
    );
    for (i, r) in rows.iter().enumerate() {
        let _ = writeln!(
            report,
            "  {i:03}: {} = {} status {} bound {}{}",
            sweep.parameter,
            real(r.value),
            r.status,
            r.bound.map(real).unwrap_or_else(|| "-".into()),
            if r.note.is_empty() { String::new() } else { format!(" ({})", r.note) }
        );
    }
    let _ = writeln!(
        report,
        "bound nondecreasing in {}: {} ({} of {} samples with a bound)",
        sweep.parameter,
        if monotone { "yes" } else { "no" },
        bounds.len(),
        rows.len()
    );
    // a violation outranks a failed sample, which outranks success
    let status = rows.iter().map(|r| r.status).max().unwrap_or(EXIT_OK);
    Ok(ModeResult::new(status, report))
}
