//! Classical layer: brackets, canonical lifts, Noether symmetry functions,
//! symmetry classification and conservation along integrated trajectories.

mod bracket;
mod dynamics;
mod noether;
mod space;

pub use bracket::{
    hamilton_derivative, homogeneous_hamiltonian, poisson_homogeneous, poisson_vertical,
    PhaseFunction,
};
pub use dynamics::{
    conservation_drift, hamilton_rhs, integrate, series, IntegrateError, Trajectory,
};
pub use noether::{
    canonical_lift, is_symmetry, lie_derivative_coefficient, momentum_along, noether_function,
    noether_rate, symmetry_residual, LiftedField,
};
pub use space::{
    ConfigurationSpace, Hamiltonian, ProjectableField, SpaceError, SymmetryCheck,
    HOMOGENEOUS_MOMENTUM, TIME,
};
