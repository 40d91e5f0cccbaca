//! Noether conservation laws for time-dependent Hamiltonian mechanics,
//! checked symbolically, along integrated trajectories, and on quantized
//! grid operators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod expr;
pub mod quantum;
pub mod scalar;

pub use expr::{parse, probabilistic_equal, Binding, Domain, Expr, DEFAULT_SEED};
pub use scalar::{Real, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::Rational64;
pub type Binding64 = Binding<f64>;
pub type Trajectory64 = classical::Trajectory<f64>;
pub type Grid64 = quantum::Grid<f64>;
pub type WaveFunction64 = quantum::WaveFunction<f64>;
pub type GridOperator64 = quantum::GridOperator<f64>;
