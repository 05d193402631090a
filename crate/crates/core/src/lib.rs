//! Explicit lower bounds on the blow-up time, and a global-existence ceiling,
//! for the porous medium equation with nonlocal source, absorption and
//! gradient damping
//!
//! ```text
//! u_t = Δu^m + a ∫_Ω u^p − b u^q − c |∇√u|²   in Ω × (0, t*)
//! ∂u/∂ν = g(u) ≤ k u^β                          on ∂Ω
//! ```
//!
//! together with a method-of-lines solver that measures the empirical
//! blow-up time so the bounds can be checked against it.
//!
//! Module map:
//! - [`geometry`]: domains, the support/diameter scalars `rho0`, `d`, grids and quadrature.
//! - [`regime`]: parameter records and the hypothesis checks selecting a bound.
//! - [`bounds`]: constant ledgers, blow-up time lower bounds, ε₁ optimisation, global ceiling.
//! - [`pde`]: spatial operator, time stepping, blow-up detection and t* extrapolation.
//! - [`verify`]: numerical checks of the trace/interpolation inequalities and of the
//!   differential inequality on simulated φ(t).

// Negated comparisons are used on purpose so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod geometry;
pub mod optimize;
pub mod pde;
pub mod quadrature;
pub mod regime;
pub mod verify;

pub use bounds::{
    BlowUpLedger, BoundFormula, BoundResult, BoundVariant, ConstantsLedger, EpsilonChoice,
    GlobalLedger,
};
pub use error::{Error, Result};
pub use geometry::{DomainGeometry, DomainShape, ShapeKind, SpatialGrid};
pub use pde::{
    Field, InitialDatum, Integrator, Sample, SimulationSeries, SolverConfig, Verdict,
};
pub use regime::{Condition, ProblemParams, RegimeVerdict};
pub use verify::{EnvelopeReport, InequalityCase, InequalityKind, InequalityReport, TestFunction};
