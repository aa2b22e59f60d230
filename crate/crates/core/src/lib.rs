//! Exact measures of ordinary and strong projections of finite-dimensional
//! sets in infinite-dimensional power measure spaces.
//!
//! Sets live in `[0,1)^α` with the Lebesgue power measure, or in `T^α` for a
//! countable atom base `T` with a discrete power measure. Dimensions are
//! sparse, so only the finitely many free variables of a set are stored.
//!
//! * [`set_core`] and [`discrete_core`]: the Boolean and cylindric algebra.
//! * [`measure_engine`]: power measures, fiber profiles and the closed forms
//!   for the measures of n-fold unions and intersections of substituted copies.
//! * [`projection_engine`]: strong projections, convergence tables and
//!   continuity audits.
//! * [`oracle`]: brute-force materialization and cell enumeration used to
//!   cross-check the closed forms.

// Error payloads carry exact rationals; errors are rare, so size is not a concern.
#![allow(clippy::result_large_err)]

pub mod discrete_core;
pub mod measure_engine;
pub mod oracle;
pub mod projection_engine;
pub mod rational;
pub mod set_core;

pub use discrete_core::{AtomSet, AtomUniverse, DiscreteBase, DiscreteError, DiscreteSet};
pub use measure_engine::{FiberProfile, Lebesgue, PowerMeasure};
pub use rational::{MeasureValue, Q};
pub use set_core::{Component, DimVar, FinDimSet, Interval, OneDimSet, SetError, Term};
