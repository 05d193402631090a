//! Delimited-text writers. Every real is printed with 17 significant digits.

use std::fmt::Write as _;

use pmelab_core::verify::SuiteCase;
use pmelab_core::{BoundResult, ConstantsLedger, EnvelopeReport, InequalityReport};

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(real).unwrap_or_default()
}

pub const BOUNDS_HEADER: &str =
    "variant,formula,phi0,value,tail_lo,tail_hi,c1,c2,c3,c4,c5,upsilon,eps1,eps2,eps3,eps1_max,sigma,alpha,eps,m1,m2";

pub fn bound_row(b: &BoundResult) -> String {
    let mut cols = vec![
        b.ledger.variant().name().to_string(),
        b.formula.name().to_string(),
        real(b.phi0),
        real(b.value),
        opt(b.tail_bracket.map(|t| t.0)),
        opt(b.tail_bracket.map(|t| t.1)),
    ];
    match b.ledger {
        ConstantsLedger::BlowUp(l) => {
            let e = l.epsilons;
            cols.extend([real(l.c1), real(l.c2), real(l.c3), real(l.c4), real(l.c5), opt(l.upsilon)]);
            cols.extend([
                opt(e.map(|e| e.eps1)),
                opt(e.map(|e| e.eps2)),
                opt(e.map(|e| e.eps3)),
                opt(e.map(|e| e.eps1_max)),
            ]);
            cols.extend(std::iter::repeat_n(String::new(), 5));
        }
        ConstantsLedger::Global(g) => {
            cols.extend(std::iter::repeat_n(String::new(), 10));
            cols.extend([real(g.sigma), real(g.alpha), real(g.eps), real(g.m1), real(g.m2)]);
        }
    }
    cols.join(",")
}

pub fn bounds_csv(bounds: &[BoundResult]) -> String {
    let mut out = String::from(BOUNDS_HEADER);
    out.push('\n');
    for b in bounds {
        out.push_str(&bound_row(b));
        out.push('\n');
    }
    out
}

pub const INEQUALITIES_HEADER: &str = "kind,shape,lambda,epsilon,test_function,resolution,lhs,rhs,margin,relative_margin,margin_2x,margin_4x,relative_2x,relative_4x,pass";

/// Suite rows; the test-function column is quoted since names contain commas.
pub fn inequalities_csv(cases: &[SuiteCase], reports: &[InequalityReport], pass: impl Fn(&InequalityReport) -> bool) -> String {
    let mut out = String::from(INEQUALITIES_HEADER);
    out.push('\n');
    for (c, r) in cases.iter().zip(reports) {
        let _ = writeln!(
            out,
            "{},{},{},{},\"{}\",{},{},{},{},{},{},{},{},{},{}",
            r.kind.name(),
            c.shape.kind().name(),
            real(r.lambda),
            opt(r.epsilon),
            c.case.test_function.name(),
            r.resolution,
            real(r.lhs),
            real(r.rhs),
            real(r.margin),
            real(r.relative_margin),
            real(r.margin_refined[0]),
            real(r.margin_refined[1]),
            real(r.relative_refined[0]),
            real(r.relative_refined[1]),
            pass(r),
        );
    }
    out
}

pub const ENVELOPE_HEADER: &str = "check,pairs,worst_ratio,worst_time,tolerance,holds";

pub fn envelope_csv(e: &EnvelopeReport) -> String {
    format!(
        "{ENVELOPE_HEADER}\nphi-envelope,{},{},{},{},{}\n",
        e.pairs,
        real(e.worst_ratio),
        real(e.worst_time),
        real(e.tolerance),
        e.holds
    )
}
