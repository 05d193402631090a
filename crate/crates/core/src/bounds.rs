//! Constant ledgers and explicit bounds.
//!
//! For `φ(t) = ∫_Ω u^{ms}` (`s = p − 1`) the energy estimates reduce to the
//! comparison inequalities
//!
//! ```text
//! N = 3:  φ' ≤ c₁ φ + c₅ φ³        ⇒  t* ≥ ln(1 + c₁/(c₅ φ₀²)) / (2c₁)
//! N = 2:  φ' ≤ c̄₁ φ + c̄₅ φ²        ⇒  t* ≥ ln(1 + c̄₁/(c̄₅ φ₀)) / c̄₁
//! ```
//!
//! where the constants depend on a free parameter `0 < ε₁ < 2ρ₀c/(5m²sdk)`.
//! The auxiliary ε₂ is the largest value keeping the gradient coefficient
//! `c₄ ≤ 0` (it makes `c₄ = 0`), and ε₃ absorbs the `φ^{3/2}` term into the
//! absorption term. In the global regime `ψ(t) = ∫_Ω u²` stays below the
//! ceiling `C = max{ψ₀, |Ω|(M₁/M₂)^{2/(q−p)}}`.
//!
//! All blow-up constants share the bracket
//!
//! ```text
//! A(ε₁) = 2as|Ω| + 3m²sk/(2ρ₀) + 5m³s²kd/(8ρ₀ε₁)
//! ```
//!
//! which collects the coefficients of `∫u^{3ms/2}` before the
//! interpolation inequality is applied. The N = 2 constants follow the same
//! bookkeeping with the planar interpolation inequality; see
//! `docs/planar-constants.md`.

use std::f64::consts::SQRT_2;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::DomainGeometry;
use crate::optimize::{maximize_on_grid, uniform_grid};
use crate::quadrature::improper_integral;
use crate::regime::{classify, ProblemParams};

/// Number of ε₁ samples in the optimiser's admissible-interval grid.
pub const EPS1_GRID_POINTS: usize = 100;
/// Relative bracket width at which the ε₁ search stops.
pub const EPS1_REL_WIDTH: f64 = 1e-8;
/// Relative band within which Υ counts as zero.
pub const UPSILON_ZERO_TOL: f64 = 1e-12;
/// Absolute quadrature tolerance of the integral-form bounds.
pub const QUAD_ABS_TOL: f64 = 1e-10;
/// Relative quadrature tolerance; binds when the bound is far below one.
pub const QUAD_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundVariant {
    BlowUp3d,
    BlowUp2d,
    Global,
}

impl BoundVariant {
    pub fn name(self) -> &'static str {
        match self {
            BoundVariant::BlowUp3d => "blowup-3d",
            BoundVariant::BlowUp2d => "blowup-2d",
            BoundVariant::Global => "global",
        }
    }
}

impl fmt::Display for BoundVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundFormula {
    Closed3d,
    Closed2d,
    Quadrature3d,
    Quadrature2d,
    Closed2dUpsilonPositive,
    Closed2dUpsilonZero,
    GlobalCeiling,
}

impl BoundFormula {
    pub fn name(self) -> &'static str {
        match self {
            BoundFormula::Closed3d => "closed-3d",
            BoundFormula::Closed2d => "closed-2d",
            BoundFormula::Quadrature3d => "quadrature-3d",
            BoundFormula::Quadrature2d => "quadrature-2d",
            BoundFormula::Closed2dUpsilonPositive => "closed-2d-upsilon-positive",
            BoundFormula::Closed2dUpsilonZero => "closed-2d-upsilon-zero",
            BoundFormula::GlobalCeiling => "global-ceiling",
        }
    }
}

impl fmt::Display for BoundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The ε-choices behind a blow-up ledger (ε₂, ε₃ are the barred values for N = 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonChoice {
    pub eps1: f64,
    pub eps2: f64,
    pub eps3: f64,
    pub eps1_max: f64,
}

/// Constants of a blow-up bound (`c₁…c₅`, or `c̄₁…c̄₅` for N = 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowUpLedger {
    pub variant: BoundVariant,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Gradient coefficient at the stored ε-choice; zero up to rounding.
    pub c4: f64,
    pub c5: f64,
    /// `4c̄₁c̄₃ − c̄₂²`, N = 2 only.
    pub upsilon: Option<f64>,
    /// `None` for ledgers assembled directly from coefficients.
    pub epsilons: Option<EpsilonChoice>,
}

impl BlowUpLedger {
    /// A ledger with given coefficients and no ε provenance.
    pub fn from_coefficients(variant: BoundVariant, c1: f64, c2: f64, c3: f64, c5: f64) -> Self {
        BlowUpLedger {
            variant,
            c1,
            c2,
            c3,
            c4: 0.0,
            c5,
            upsilon: (variant == BoundVariant::BlowUp2d).then_some(4.0 * c1 * c3 - c2 * c2),
            epsilons: None,
        }
    }
}

/// Constants of the global-existence ceiling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalLedger {
    pub sigma: f64,
    pub alpha: f64,
    /// The Young parameter ε chosen so that `M₂ = b`.
    pub eps: f64,
    pub m1: f64,
    pub m2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstantsLedger {
    BlowUp(BlowUpLedger),
    Global(GlobalLedger),
}

impl ConstantsLedger {
    pub fn variant(&self) -> BoundVariant {
        match self {
            ConstantsLedger::BlowUp(l) => l.variant,
            ConstantsLedger::Global(_) => BoundVariant::Global,
        }
    }

    pub fn blowup(&self) -> Option<&BlowUpLedger> {
        match self {
            ConstantsLedger::BlowUp(l) => Some(l),
            ConstantsLedger::Global(_) => None,
        }
    }
}

impl From<BlowUpLedger> for ConstantsLedger {
    fn from(l: BlowUpLedger) -> Self {
        ConstantsLedger::BlowUp(l)
    }
}

impl From<GlobalLedger> for ConstantsLedger {
    fn from(l: GlobalLedger) -> Self {
        ConstantsLedger::Global(l)
    }
}

/// A lower bound `T` on the blow-up time, or the ceiling `C` on ψ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundResult {
    pub ledger: ConstantsLedger,
    /// φ(0) for blow-up variants, ψ(0) for the ceiling.
    pub phi0: f64,
    pub value: f64,
    pub formula: BoundFormula,
    /// Analytic bracket of the truncated tail for quadrature formulas.
    pub tail_bracket: Option<(f64, f64)>,
}

/// Upper end of the admissible ε₁ interval, `2ρ₀c/(5m²sdk)`.
pub fn eps1_max(params: &ProblemParams, geom: &DomainGeometry) -> f64 {
    let s = params.s();
    2.0 * geom.rho0 * params.c / (5.0 * params.m.powi(2) * s * geom.d * params.k)
}

/// The ε₁ grid the optimiser scans: 100 points on `[δ, ε₁max − δ]`, `δ = 10⁻⁶ ε₁max`.
pub fn eps1_grid(eps1_max: f64) -> Vec<f64> {
    let delta = 1e-6 * eps1_max;
    uniform_grid(delta, eps1_max - delta, EPS1_GRID_POINTS)
}

/// `c₄(ε₁, ε₂)` transcribed term by term.
pub fn c4_3d(params: &ProblemParams, geom: &DomainGeometry, eps1: f64, eps2: f64) -> f64 {
    let ProblemParams { a, c, k, m, .. } = *params;
    let s = params.s();
    let (rho0, d, vol) = (geom.rho0, geom.d, geom.volume);
    (d / rho0 + 1.0).powf(1.5)
        * eps2
        * (1.5 * SQRT_2 * a * s * vol
            + 9.0 * SQRT_2 * m * m * s * k / (8.0 * rho0)
            + 15.0 * SQRT_2 * m.powi(3) * s * s * k * d / (32.0 * eps1 * rho0))
        + 5.0 * m * d * k * eps1 / (2.0 * rho0)
        - c / (m * s)
}

/// `c̄₄(ε₁, ε̄₂)` transcribed term by term.
pub fn c4_2d(params: &ProblemParams, geom: &DomainGeometry, eps1: f64, eps2: f64) -> f64 {
    let ProblemParams { a, c, k, m, .. } = *params;
    let s = params.s();
    let (rho0, d, vol) = (geom.rho0, geom.d, geom.volume);
    SQRT_2 / (4.0 * rho0)
        * (d + rho0)
        * eps2
        * eps2
        * (2.0 * a * s * vol
            + 3.0 * m * m * s * k / (2.0 * rho0)
            + 5.0 * m.powi(3) * s * s * k * d / (8.0 * eps1 * rho0))
        + 5.0 * m * d * k * eps1 / (2.0 * rho0)
        - c / (m * s)
}

/// Pieces shared by both dimensions at a given ε₁.
struct BlowUpBase {
    ms: f64,
    c1: f64,
    /// coefficient of ∫u^{3ms/2} before interpolation
    bracket: f64,
    /// ε₂-free part of c₄; negative for admissible ε₁
    c4_free: f64,
    /// b·|Ω|^{(1−q)/(ms)}
    absorption: f64,
    eps1_max: f64,
}

fn blowup_base(
    params: &ProblemParams,
    geom: &DomainGeometry,
    eps1: f64,
    dimension: usize,
) -> Result<BlowUpBase> {
    let verdict = classify(params, geom.dimension);
    let ok = match dimension {
        3 => verdict.blowup_bound_3d,
        _ => verdict.blowup_bound_2d,
    };
    if !ok {
        let why: Vec<String> = verdict.violated_conditions.iter().map(|c| c.to_string()).collect();
        return Err(Error::Usage(format!(
            "the N = {dimension} blow-up bound does not apply to a {}-dimensional {}: {}",
            geom.dimension,
            geom.shape.kind(),
            if why.is_empty() { "dimension mismatch".to_string() } else { why.join("; ") }
        )));
    }
    let e1max = eps1_max(params, geom);
    if !(eps1 > 0.0 && eps1 < e1max) {
        return Err(Error::Precondition(format!(
            "eps1 = {eps1} outside the admissible interval (0, {e1max})"
        )));
    }
    let ProblemParams { a, b, c, k, m, q, .. } = *params;
    let s = params.s();
    let ms = m * s;
    let (rho0, d, vol) = (geom.rho0, geom.d, geom.volume);
    let c4_free = 5.0 * m * d * k * eps1 / (2.0 * rho0) - c / ms;
    if !(c4_free < 0.0) {
        return Err(Error::Infeasible(format!(
            "no eps2 makes c4 nonpositive at eps1 = {eps1} (eps2-free part {c4_free} >= 0)"
        )));
    }
    if !(ms - 2.0 * q + 2.0 > 0.0) {
        return Err(Error::Infeasible(format!(
            "ms - 2q + 2 = {} must be positive",
            ms - 2.0 * q + 2.0
        )));
    }
    Ok(BlowUpBase {
        ms,
        c1: a * (m - 2.0) * s * vol + 3.0 * m * m * s * k / (2.0 * rho0),
        bracket: 2.0 * a * s * vol
            + 3.0 * m * m * s * k / (2.0 * rho0)
            + 5.0 * m.powi(3) * s * s * k * d / (8.0 * rho0 * eps1),
        c4_free,
        absorption: b * vol.powf((1.0 - q) / ms),
        eps1_max: e1max,
    })
}

/// Ledger of the N = 3 bound at a given ε₁.
pub fn constants_3d(params: &ProblemParams, geom: &DomainGeometry, eps1: f64) -> Result<BlowUpLedger> {
    let base = blowup_base(params, geom, eps1, 3)?;
    let (rho0, d, q) = (geom.rho0, geom.d, params.q);
    let ms = base.ms;
    let shape = (d / rho0 + 1.0).powf(1.5);

    let c2 = base.bracket * 3f64.powf(1.5) / (2.0 * rho0.powf(1.5));
    // c₄ = K ε₂ + c4_free with K the coefficient of the gradient term
    let grad_coeff = base.bracket * 0.75 * SQRT_2 * shape;
    let eps2 = -base.c4_free / grad_coeff;
    let c3 = base.bracket * SQRT_2 * shape / (4.0 * eps2.powi(3));

    let young = 4.0 * ms - 2.0 * q + 2.0;
    let lean = ms - 2.0 * q + 2.0;
    let eps3 = (base.absorption * young / (3.0 * c2)).powf(3.0 * ms / young);
    let c5 = c2 * lean / young * eps3.powf(-young / lean) + c3;

    Ok(BlowUpLedger {
        variant: BoundVariant::BlowUp3d,
        c1: base.c1,
        c2,
        c3,
        c4: c4_3d(params, geom, eps1, eps2),
        c5,
        upsilon: None,
        epsilons: Some(EpsilonChoice {
            eps1,
            eps2,
            eps3,
            eps1_max: base.eps1_max,
        }),
    })
}

/// Ledger of the N = 2 bound at a given ε₁.
///
/// `c̄₁ = c₁`, `c̄₂ = A√2/(2ρ₀)`, `c̄₃ = A√2(d + ρ₀)/(4ρ₀ε̄₂²)`, and ε̄₂ solves
/// `c̄₄ = A√2(d + ρ₀)ε̄₂²/(4ρ₀) + 5mdkε₁/(2ρ₀) − c/(ms) = 0`.
pub fn constants_2d(params: &ProblemParams, geom: &DomainGeometry, eps1: f64) -> Result<BlowUpLedger> {
    let base = blowup_base(params, geom, eps1, 2)?;
    let (rho0, d, q) = (geom.rho0, geom.d, params.q);
    let ms = base.ms;

    let c2 = base.bracket * SQRT_2 / (2.0 * rho0);
    let grad_coeff = base.bracket * SQRT_2 * (d + rho0) / (4.0 * rho0);
    let eps2 = (-base.c4_free / grad_coeff).sqrt();
    let c3 = base.bracket * SQRT_2 * (d + rho0) / (4.0 * rho0 * eps2 * eps2);

    let young = 2.0 * ms - 2.0 * q + 2.0;
    let lean = ms - 2.0 * q + 2.0;
    let eps3 = (young / c2 * base.absorption).powf(ms / young);
    let c5 = lean / young * c2 * eps3.powf(-young / lean) + c3;

    Ok(BlowUpLedger {
        variant: BoundVariant::BlowUp2d,
        c1: base.c1,
        c2,
        c3,
        c4: c4_2d(params, geom, eps1, eps2),
        c5,
        upsilon: Some(4.0 * base.c1 * c3 - c2 * c2),
        epsilons: Some(EpsilonChoice {
            eps1,
            eps2,
            eps3,
            eps1_max: base.eps1_max,
        }),
    })
}

/// Exact blow-up time of `φ' = c_lin φ + c_pow φ^n` from `φ(0) = phi0`, `n ∈ {2, 3}`.
pub fn comparison_ode_blowup(c_lin: f64, c_pow: f64, exponent: u32, phi0: f64) -> Result<f64> {
    if !(c_lin > 0.0 && c_pow > 0.0 && phi0 > 0.0) {
        return Err(Error::Precondition(format!(
            "comparison ODE needs positive c_lin, c_pow, phi0 (got {c_lin}, {c_pow}, {phi0})"
        )));
    }
    match exponent {
        3 => Ok((c_lin / (c_pow * phi0 * phi0)).ln_1p() / (2.0 * c_lin)),
        2 => Ok((c_lin / (c_pow * phi0)).ln_1p() / c_lin),
        n => Err(Error::Precondition(format!("comparison ODE exponent must be 2 or 3, got {n}"))),
    }
}

fn expect_variant(ledger: &BlowUpLedger, want: BoundVariant) -> Result<()> {
    if ledger.variant != want {
        return Err(Error::Usage(format!(
            "expected a {want} ledger, got {}",
            ledger.variant
        )));
    }
    Ok(())
}

fn positive_phi0(phi0: f64) -> Result<()> {
    if !(phi0 > 0.0 && phi0.is_finite()) {
        return Err(Error::Precondition(format!("phi0 must be positive and finite, got {phi0}")));
    }
    Ok(())
}

/// `T = ln(1 + c₁/(c₅φ₀²)) / (2c₁)`.
pub fn lower_bound_3d(ledger: &BlowUpLedger, phi0: f64) -> Result<BoundResult> {
    expect_variant(ledger, BoundVariant::BlowUp3d)?;
    positive_phi0(phi0)?;
    Ok(BoundResult {
        ledger: (*ledger).into(),
        phi0,
        value: comparison_ode_blowup(ledger.c1, ledger.c5, 3, phi0)?,
        formula: BoundFormula::Closed3d,
        tail_bracket: None,
    })
}

/// `T = ∫_{φ₀}^∞ dτ / (c₁τ + c₂τ^{3/2} + c₅τ³)` by quadrature.
pub fn lower_bound_3d_quadrature(ledger: &BlowUpLedger, phi0: f64) -> Result<BoundResult> {
    expect_variant(ledger, BoundVariant::BlowUp3d)?;
    positive_phi0(phi0)?;
    let BlowUpLedger { c1, c2, c5, .. } = *ledger;
    let integrand = |t: f64| 1.0 / (c1 * t + c2 * t.powf(1.5) + c5 * t.powi(3));
    let tail = |x: f64| {
        let upper = 1.0 / (2.0 * c5 * x * x);
        let lower = 1.0 / (2.0 * x * x * (c5 + c2 * x.powf(-1.5) + c1 / (x * x)));
        (lower, upper)
    };
    let r = improper_integral(integrand, phi0, 1e4 * phi0, tail, QUAD_ABS_TOL, QUAD_REL_TOL)?;
    Ok(BoundResult {
        ledger: (*ledger).into(),
        phi0,
        value: r.value,
        formula: BoundFormula::Quadrature3d,
        tail_bracket: Some(r.tail),
    })
}

/// `T = ln(1 + c̄₁/(c̄₅φ₀)) / c̄₁`.
pub fn lower_bound_2d(ledger: &BlowUpLedger, phi0: f64) -> Result<BoundResult> {
    expect_variant(ledger, BoundVariant::BlowUp2d)?;
    positive_phi0(phi0)?;
    Ok(BoundResult {
        ledger: (*ledger).into(),
        phi0,
        value: comparison_ode_blowup(ledger.c1, ledger.c5, 2, phi0)?,
        formula: BoundFormula::Closed2d,
        tail_bracket: None,
    })
}

/// `T = ∫_{φ₀}^∞ dτ / (c̄₁τ + c̄₂τ^{3/2} + c̄₃τ²)`: closed form when Υ ≥ 0,
/// quadrature otherwise.
///
/// With `x = √τ` the integrand becomes `2/(x(c̄₁ + c̄₂x + c̄₃x²))`, whose
/// partial fractions give, for `x₀ = √φ₀` and `Q₀ = c̄₁ + c̄₂x₀ + c̄₃x₀²`,
///
/// ```text
/// Υ > 0:  T = ln(Q₀/(c̄₃φ₀))/c̄₁ − 2c̄₂ atan(√Υ/(c̄₂ + 2c̄₃x₀)) / (c̄₁√Υ)
/// Υ = 0:  T = ln(Q₀/(c̄₃φ₀))/c̄₁ − 2c̄₂ / (c̄₁(c̄₂ + 2c̄₃x₀))
/// ```
pub fn lower_bound_2d_quadrature(ledger: &BlowUpLedger, phi0: f64) -> Result<BoundResult> {
    expect_variant(ledger, BoundVariant::BlowUp2d)?;
    positive_phi0(phi0)?;
    let BlowUpLedger { c1, c2, c3, .. } = *ledger;
    let upsilon = 4.0 * c1 * c3 - c2 * c2;
    let x0 = phi0.sqrt();
    let log_part = ((c1 + c2 * x0) / (c3 * phi0)).ln_1p() / c1;
    let zero_band = UPSILON_ZERO_TOL * (4.0 * c1 * c3).max(c2 * c2);

    let (value, formula, tail_bracket) = if upsilon.abs() <= zero_band {
        let v = log_part - 2.0 * c2 / (c1 * (c2 + 2.0 * c3 * x0));
        (v, BoundFormula::Closed2dUpsilonZero, None)
    } else if upsilon > 0.0 {
        let root = upsilon.sqrt();
        // c̄₂(π − 2 atan z) written as 2c̄₂ atan(1/z) to avoid cancellation
        let v = log_part - 2.0 * c2 * (root / (c2 + 2.0 * c3 * x0)).atan() / (c1 * root);
        (v, BoundFormula::Closed2dUpsilonPositive, None)
    } else {
        let integrand = |t: f64| 1.0 / (c1 * t + c2 * t.powf(1.5) + c3 * t * t);
        let tail = |x: f64| {
            let upper = 1.0 / (c3 * x);
            let lower = 1.0 / (x * (c3 + c2 / x.sqrt() + c1 / x));
            (lower, upper)
        };
        let r = improper_integral(integrand, phi0, 1e8 * phi0, tail, QUAD_ABS_TOL, QUAD_REL_TOL)?;
        (r.value, BoundFormula::Quadrature2d, Some(r.tail))
    };
    let mut stored = *ledger;
    stored.upsilon = Some(upsilon);
    Ok(BoundResult {
        ledger: stored.into(),
        phi0,
        value,
        formula,
        tail_bracket,
    })
}

/// Maximises the closed-form bound over ε₁.
pub fn optimize_eps1(
    params: &ProblemParams,
    geom: &DomainGeometry,
    phi0: f64,
    variant: BoundVariant,
) -> Result<BoundResult> {
    positive_phi0(phi0)?;
    let evaluate = |eps1: f64| -> Result<BoundResult> {
        match variant {
            BoundVariant::BlowUp3d => lower_bound_3d(&constants_3d(params, geom, eps1)?, phi0),
            BoundVariant::BlowUp2d => lower_bound_2d(&constants_2d(params, geom, eps1)?, phi0),
            BoundVariant::Global => Err(Error::Usage(
                "eps1 optimisation applies to blow-up variants only".to_string(),
            )),
        }
    };
    // surface usage errors (regime mismatch) before scanning
    let e1max = eps1_max(params, geom);
    if let Err(e @ Error::Usage(_)) = evaluate(0.5 * e1max) {
        return Err(e);
    }
    let grid = eps1_grid(e1max);
    let objective = |eps1: f64| evaluate(eps1).ok().map(|r| r.value);
    let best = maximize_on_grid(&objective, &grid, EPS1_REL_WIDTH).ok_or_else(|| {
        Error::Infeasible(format!("every sampled eps1 in (0, {e1max}) is infeasible"))
    })?;
    evaluate(best.x)
}

/// Ceiling `C` on `ψ(t) = ∫u²` in the global regime.
pub fn global_ceiling(params: &ProblemParams, geom: &DomainGeometry, psi0: f64) -> Result<BoundResult> {
    let verdict = classify(params, geom.dimension);
    if !verdict.global_existence {
        let why: Vec<String> = verdict.violated_conditions.iter().map(|c| c.to_string()).collect();
        return Err(Error::Usage(format!(
            "global ceiling needs the global-existence regime: {}",
            why.join("; ")
        )));
    }
    positive_phi0(psi0)?;
    let ProblemParams { a, b, k, m, p, q, .. } = *params;
    let (rho0, d, vol) = (geom.rho0, geom.d, geom.volume);
    let n = geom.dimension as f64;

    let sigma = k * d * (p + 1.0) * (m + 1.0) / (4.0 * rho0);
    let alpha = (q + m - 2.0 * p) / (q - p);
    let weight = 8.0 * m * sigma * sigma / (m + 1.0).powi(2);
    let eps = b / (weight * (1.0 - alpha));
    let m1 = 2.0 * k * n * m / rho0 + 2.0 * a * vol + weight * alpha * eps.powf((alpha - 1.0) / alpha);
    let m2 = 2.0 * b - weight * eps * (1.0 - alpha);
    let plateau = vol * (m1 / m2).powf(2.0 / (q - p));

    Ok(BoundResult {
        ledger: GlobalLedger {
            sigma,
            alpha,
            eps,
            m1,
            m2,
        }
        .into(),
        phi0: psi0,
        value: psi0.max(plateau),
        formula: BoundFormula::GlobalCeiling,
        tail_bracket: None,
    })
}
