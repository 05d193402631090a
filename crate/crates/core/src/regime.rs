//! Parameter records and the hypothesis checks that decide which bound applies.
//!
//! Two families are recognised. When `p > q` the blow-up lower bound is
//! available in dimension 2 or 3 provided
//!
//! ```text
//! q > 3/2,  m ∈ (2, 8/(5 − p)) for p < 5  or  m > 2 for p ≥ 5,
//! β = m(p − 1)/4 − m + 2 > 0
//! ```
//!
//! and when `q > p` the global-existence ceiling applies in any dimension
//! provided `q > p > m > 1` and `2p < m + q`. All inequalities are strict
//! and evaluated without tolerance.

use std::fmt;

use crate::error::{Error, Result};

/// Coefficients and exponents of the equation. The flux bound is
/// `g(ξ) ≤ k ξ^β`; `β` is derived from the active regime.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub k: f64,
    pub m: f64,
    pub p: f64,
    pub q: f64,
}

impl ProblemParams {
    pub fn new(a: f64, b: f64, c: f64, k: f64, m: f64, p: f64, q: f64) -> Self {
        ProblemParams { a, b, c, k, m, p, q }
    }

    /// `s = p − 1`
    pub fn s(&self) -> f64 {
        self.p - 1.0
    }

    /// `m·s`, the exponent of the blow-up functional φ = ∫u^{ms}.
    pub fn ms(&self) -> f64 {
        self.m * self.s()
    }

    /// Flux exponent of the blow-up regime, `m(p − 1)/4 − m + 2`.
    pub fn beta_blowup(&self) -> f64 {
        self.m * self.s() / 4.0 - self.m + 2.0
    }

    /// Flux exponent of the global regime, `p − m + 1`.
    pub fn beta_global(&self) -> f64 {
        self.p - self.m + 1.0
    }

    /// Checks the record-level invariants: finite values, `a, b, c, k > 0`
    /// and `m, p, q > 1`.
    pub fn validate(&self) -> Result<()> {
        let v = self.record_violations();
        if v.is_empty() {
            Ok(())
        } else {
            let names: Vec<String> = v.iter().map(|c| c.to_string()).collect();
            Err(Error::Config(names.join("; ")))
        }
    }

    fn record_violations(&self) -> Vec<Condition> {
        let mut out = Vec::new();
        for (name, value) in [("a", self.a), ("b", self.b), ("c", self.c), ("k", self.k)] {
            if !(value.is_finite() && value > 0.0) {
                out.push(Condition::CoefficientNotPositive { name, value });
            }
        }
        for (name, value) in [("m", self.m), ("p", self.p), ("q", self.q)] {
            if !(value.is_finite() && value > 1.0) {
                out.push(Condition::ExponentNotAboveOne { name, value });
            }
        }
        out
    }
}

/// A named hypothesis failure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Condition {
    CoefficientNotPositive { name: &'static str, value: f64 },
    ExponentNotAboveOne { name: &'static str, value: f64 },
    /// `p = q`: neither family applies.
    SourceEqualsAbsorption { p: f64 },
    /// Blow-up bounds exist only for N = 2 or N = 3.
    DimensionUnsupported { dimension: usize },
    QNotAboveThreeHalves { q: f64 },
    /// `m ∉ (2, upper)`; `upper` is `None` when `p ≥ 5`.
    MOutsideWindow { m: f64, upper: Option<f64> },
    BetaNotPositive { beta: f64 },
    PNotAboveM { p: f64, m: f64 },
    /// `2p < m + q` fails.
    SourceTooStrong { p: f64, m: f64, q: f64 },
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Condition::CoefficientNotPositive { name, value } => {
                write!(f, "{name} > 0 violated ({name} = {value})")
            }
            Condition::ExponentNotAboveOne { name, value } => {
                write!(f, "{name} > 1 violated ({name} = {value})")
            }
            Condition::SourceEqualsAbsorption { p } => {
                write!(f, "p = q = {p}: neither p > q nor q > p holds")
            }
            Condition::DimensionUnsupported { dimension } => {
                write!(f, "blow-up bound needs dimension 2 or 3, got {dimension}")
            }
            Condition::QNotAboveThreeHalves { q } => write!(f, "q > 3/2 violated (q = {q})"),
            Condition::MOutsideWindow { m, upper: Some(u) } => {
                write!(f, "m in (2, 8/(5-p)) = (2, {u}) violated (m = {m})")
            }
            Condition::MOutsideWindow { m, upper: None } => {
                write!(f, "m > 2 violated (m = {m})")
            }
            Condition::BetaNotPositive { beta } => {
                write!(f, "beta = m(p-1)/4 - m + 2 > 0 violated (beta = {beta})")
            }
            Condition::PNotAboveM { p, m } => write!(f, "p > m violated (p = {p}, m = {m})"),
            Condition::SourceTooStrong { p, m, q } => {
                write!(f, "2p < m + q violated (2p = {}, m + q = {})", 2.0 * p, m + q)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegimeVerdict {
    pub blowup_bound_3d: bool,
    pub blowup_bound_2d: bool,
    pub global_existence: bool,
    pub violated_conditions: Vec<Condition>,
}

impl RegimeVerdict {
    pub fn blowup(&self) -> bool {
        self.blowup_bound_3d || self.blowup_bound_2d
    }

    pub fn any(&self) -> bool {
        self.blowup() || self.global_existence
    }

    pub fn label(&self) -> &'static str {
        if self.blowup_bound_3d {
            "blow-up bound (N=3)"
        } else if self.blowup_bound_2d {
            "blow-up bound (N=2)"
        } else if self.global_existence {
            "global existence"
        } else {
            "not covered"
        }
    }
}

/// Classifies a parameter record. Violations are reported against the
/// family selected by the ordering of `p` and `q`.
pub fn classify(params: &ProblemParams, dimension: usize) -> RegimeVerdict {
    let ProblemParams { m, p, q, .. } = *params;
    let mut violated = params.record_violations();

    let (mut blowup, mut global) = (false, false);
    if p > q {
        let mut family = Vec::new();
        if dimension != 2 && dimension != 3 {
            family.push(Condition::DimensionUnsupported { dimension });
        }
        if !(q > 1.5) {
            family.push(Condition::QNotAboveThreeHalves { q });
        }
        let upper = (p < 5.0).then(|| 8.0 / (5.0 - p));
        let in_window = m > 2.0 && upper.is_none_or(|u| m < u);
        if !in_window {
            family.push(Condition::MOutsideWindow { m, upper });
        }
        // β > 0 is equivalent to the window's upper end, so it is only
        // reported separately when the window holds (rounding)
        let beta = params.beta_blowup();
        if in_window && !(beta > 0.0) {
            family.push(Condition::BetaNotPositive { beta });
        }
        blowup = family.is_empty() && violated.is_empty();
        violated.extend(family);
    } else if q > p {
        let mut family = Vec::new();
        if !(p > m) {
            family.push(Condition::PNotAboveM { p, m });
        }
        if !(2.0 * p < m + q) {
            family.push(Condition::SourceTooStrong { p, m, q });
        }
        global = family.is_empty() && violated.is_empty();
        violated.extend(family);
    } else {
        violated.push(Condition::SourceEqualsAbsorption { p });
    }

    RegimeVerdict {
        blowup_bound_3d: blowup && dimension == 3,
        blowup_bound_2d: blowup && dimension == 2,
        global_existence: global,
        violated_conditions: violated,
    }
}

/// The flux exponent β of the active regime.
pub fn flux_exponent(params: &ProblemParams, regime: &RegimeVerdict) -> Result<f64> {
    if regime.blowup() {
        Ok(params.beta_blowup())
    } else if regime.global_existence {
        Ok(params.beta_global())
    } else {
        Err(Error::Usage(
            "no active regime: the flux exponent is undefined".to_string(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit(m: f64, p: f64, q: f64) -> ProblemParams {
        ProblemParams::new(1.0, 1.0, 1.0, 1.0, m, p, q)
    }

    #[test]
    fn blowup_window_interior() {
        let v = classify(&unit(2.5, 2.0, 1.6), 3);
        assert!(v.blowup_bound_3d && !v.blowup_bound_2d && !v.global_existence);
        assert!(v.violated_conditions.is_empty());
        let v = classify(&unit(2.5, 2.0, 1.6), 2);
        assert!(v.blowup_bound_2d && !v.blowup_bound_3d);
    }

    #[test]
    fn global_regime() {
        let v = classify(&unit(1.5, 2.0, 3.0), 3);
        assert!(v.global_existence && !v.blowup());
        assert!(classify(&unit(1.5, 2.0, 3.0), 1).global_existence);
    }

    #[test]
    fn window_endpoint_is_excluded() {
        let v = classify(&unit(3.0, 2.0, 1.6), 3);
        assert!(!v.any());
        assert_eq!(
            v.violated_conditions,
            vec![Condition::MOutsideWindow { m: 3.0, upper: Some(8.0 / 3.0) }]
        );
        // 8/(5−2) itself
        assert!(!classify(&unit(8.0 / 3.0, 2.0, 1.6), 3).any());
    }

    #[test]
    fn large_p_branch() {
        let v = classify(&unit(2.5, 6.0, 2.0), 3);
        assert!(v.blowup_bound_3d, "{:?}", v.violated_conditions);
        // β = 2.5·5/4 − 0.5 > 0 even far into the p ≥ 5 branch
        assert!(classify(&unit(40.0, 6.0, 2.0), 3).blowup_bound_3d);
    }

    #[test]
    fn q_three_halves_flips_with_one_violation() {
        let v = classify(&unit(2.5, 2.0, 1.5), 3);
        assert!(!v.any());
        assert_eq!(v.violated_conditions, vec![Condition::QNotAboveThreeHalves { q: 1.5 }]);
        assert!(classify(&unit(2.5, 2.0, 1.5 + 1e-12), 3).blowup_bound_3d);
    }

    #[test]
    fn dimension_one_blowup_not_covered() {
        let v = classify(&unit(2.5, 2.0, 1.6), 1);
        assert!(!v.any());
        assert_eq!(v.violated_conditions, vec![Condition::DimensionUnsupported { dimension: 1 }]);
    }

    #[test]
    fn equal_exponents_not_covered() {
        let v = classify(&unit(2.5, 2.0, 2.0), 3);
        assert!(!v.any());
        assert_eq!(v.violated_conditions.len(), 1);
    }

    #[test]
    fn global_boundary_2p_equals_m_plus_q() {
        let v = classify(&unit(1.5, 2.0, 2.5), 3);
        assert!(!v.global_existence);
        assert_eq!(v.violated_conditions.len(), 1);
        assert!(matches!(v.violated_conditions[0], Condition::SourceTooStrong { .. }));
    }

    #[test]
    fn nonpositive_coefficient_blocks_every_regime() {
        let mut p = unit(2.5, 2.0, 1.6);
        p.c = 0.0;
        let v = classify(&p, 3);
        assert!(!v.any());
        assert!(p.validate().is_err());
    }

    #[test]
    fn flux_exponents() {
        let p = unit(2.5, 2.0, 1.6);
        assert!((flux_exponent(&p, &classify(&p, 3)).unwrap() - 0.125).abs() < 1e-15);
        let p = unit(1.5, 2.0, 3.0);
        assert!((flux_exponent(&p, &classify(&p, 3)).unwrap() - 1.5).abs() < 1e-15);
        let p = unit(4.0, 4.0, 2.0);
        assert_eq!(flux_exponent(&p, &classify(&p, 3)).unwrap(), 1.0);
        let p = unit(3.0, 2.0, 1.6);
        assert!(matches!(flux_exponent(&p, &classify(&p, 3)), Err(Error::Usage(_))));
    }

    proptest! {
        #[test]
        fn blowup_verdict_implies_positive_beta(
            m in 1.01f64..12.0, p in 1.01f64..9.0, q in 1.01f64..9.0, dim in 1usize..4
        ) {
            let params = unit(m, p, q);
            let v = classify(&params, dim);
            if v.blowup_bound_3d || v.blowup_bound_2d {
                prop_assert!(params.beta_blowup() > 0.0);
            }
            prop_assert!(!(v.blowup() && v.global_existence));
            prop_assert_eq!(v.violated_conditions.is_empty(), v.any());
            prop_assert_eq!(classify(&params, dim), v);
        }
    }
}
