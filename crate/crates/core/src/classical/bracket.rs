//! Poisson brackets on the homogeneous and the vertical phase space.
//!
//! Sign convention: brackets follow
//! `{f, g}_T = d^p f d_t g + d^i f d_i g - d_t f d^p g - d_i f d^i g`
//! literally, where `d^i` differentiates by the momentum `p_i` and `d_i` by
//! the coordinate `q^i`. Hence `{q, p}_T = -1`, and `{p + H, f}_T` is the
//! derivative of `f` along the Hamilton vector field.

use super::space::{ConfigurationSpace, Hamiltonian, SpaceError, HOMOGENEOUS_MOMENTUM, TIME};
use crate::expr::Expr;

/// A function on phase space, possibly depending on `p`.
pub type PhaseFunction = Expr;

/// Bracket on the homogeneous phase space `(t, q^i, p, p_i)`.
pub fn poisson_homogeneous(space: &ConfigurationSpace, f: &Expr, g: &Expr) -> Expr {
    let time_part = f.differentiate(HOMOGENEOUS_MOMENTUM) * g.differentiate(TIME)
        - f.differentiate(TIME) * g.differentiate(HOMOGENEOUS_MOMENTUM);
    time_part + vertical_terms(space, f, g)
}

/// Bracket on the vertical phase space `(t, q^i, p_i)`. Time enters only
/// as a parameter.
pub fn poisson_vertical(
    space: &ConfigurationSpace,
    f: &Expr,
    g: &Expr,
) -> Result<Expr, SpaceError> {
    if f.depends_on(HOMOGENEOUS_MOMENTUM) || g.depends_on(HOMOGENEOUS_MOMENTUM) {
        return Err(SpaceError::HomogeneousMomentum);
    }
    Ok(vertical_terms(space, f, g))
}

fn vertical_terms(space: &ConfigurationSpace, f: &Expr, g: &Expr) -> Expr {
    Expr::sum((0..space.dimension()).map(|i| {
        let (q, p) = (space.coordinate(i), space.momentum(i));
        f.differentiate(p) * g.differentiate(q) - f.differentiate(q) * g.differentiate(p)
    }))
}

/// The homogeneous Hamiltonian `p + H`.
pub fn homogeneous_hamiltonian(h: &Hamiltonian) -> Expr {
    Expr::var(HOMOGENEOUS_MOMENTUM) + h.expr()
}

/// Derivative of `f` along the Hamilton vector field,
/// `(d_t + d^i H d_i - d_i H d^i) f`.
pub fn hamilton_derivative(h: &Hamiltonian, f: &Expr) -> Expr {
    let space = h.space();
    let flow = Expr::sum((0..space.dimension()).map(|i| {
        let (q, p) = (space.coordinate(i), space.momentum(i));
        h.expr().differentiate(p) * f.differentiate(q)
            - h.expr().differentiate(q) * f.differentiate(p)
    }));
    f.differentiate(TIME) + flow
}
