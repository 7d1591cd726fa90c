//! Numerics for the spectral heat content of intervals under symmetric stable
//! processes, in both orderings of subordination and killing.
//!
//! The deterministic numerics (special functions, quadrature, density
//! series, eigenvalue series, expansion algebra) are generic over
//! [`num::Real`] and instantiated for `f32` and `f64`. Monte Carlo, tail
//! tables and validation are `f64`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Tabulated constants keep their published digits; matrix loops read better indexed.
#![allow(clippy::excessive_precision, clippy::needless_range_loop)]

pub mod asymptotics;
pub mod error;
pub mod heat;
pub mod mc;
pub mod num;
pub mod quad;
pub mod specfun;
pub mod subordinator;
pub mod supremum;
pub mod validate;

pub use asymptotics::{
    eval_expansion, fit_coefficients, residual_curve, theorem_expansion, BasisTerm, Expansion, ExpansionResources,
    FitResult,
};
pub use error::{Error, Result};
pub use heat::{
    crossing_mc, ks_mc, ks_reduction, sk_mc, sk_series, HeatCurve, Interval, McConfig, ProcessKind, Provenance,
};
pub use num::Real;
pub use specfun::{Regime, StableIndex};
pub use subordinator::DensityEvalConfig;
pub use supremum::{SupSampleConfig, TailFunction};

pub type StableIndexF64 = StableIndex<f64>;
pub type StableIndexF32 = StableIndex<f32>;
pub type IntervalF64 = Interval<f64>;
pub type IntervalF32 = Interval<f32>;
pub type ExpansionF64 = Expansion<f64>;
pub type ExpansionF32 = Expansion<f32>;
