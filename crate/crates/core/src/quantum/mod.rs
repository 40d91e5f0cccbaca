//! Quantization of affine observables on a one-dimensional grid.
//!
//! Only one spatial dimension is supported here; the classical layer keeps
//! the general index structure. States are plain complex grid functions
//! with measure `h`, vanishing at both ends of the grid.

mod dirac;
mod eigen;
mod evolve;
mod grid;
mod operator;

use thiserror::Error;

use crate::expr::{EvalError, SampleError};

pub use dirac::{dirac_residual, CExpr, DiffOp, DiracResidual, Ordering};
pub use eigen::{hermitian_eigen, stationary_states, Eigenpairs, StationaryState};
pub use evolve::{
    evolve, evolve_with, mean_series, noether_mean_drift, noether_operator, MeanSeries, Observable,
};
pub use grid::{Grid, WaveFunction};
pub use operator::{
    expectation, hermiticity_residual, quantize_affine, quantize_affine_pointwise,
    quantize_hamiltonian, real_expectation, sample_coefficient, AffineObservable, GridOperator,
    QuadraticHamiltonian,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("grid needs at least 3 interior points, got {0}")]
    GridTooSmall(usize),
    #[error("grid bounds must be finite with x_min < x_max")]
    GridBounds,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("state has zero or non-finite norm")]
    ZeroNorm,
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("quantum requires dimension 1, got {0}")]
    Dimension(usize),
    #[error("time component must be 0 or 1, got {0}")]
    TimeComponent(i64),
    #[error("`{0}` is not affine in the momenta")]
    NotAffine(String),
    #[error("`{0}` is not quadratic in the momentum")]
    NotQuadratic(String),
    #[error("coefficient `{0}` is not finite on the grid")]
    NonFinite(String),
    #[error("operator is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("mean value has imaginary part {0:e}")]
    ComplexMean(f64),
    #[error("time step must be positive and finite, with t0 < t1")]
    BadStep,
    #[error("singular linear system at step {step}")]
    SingularSolve { step: usize },
    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("requested {count} states from a {dim}-point grid")]
    TooManyStates { count: usize, dim: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Sample(#[from] SampleError),
}
