//! Hamilton equations and fixed-step trajectory integration.
//!
//! The integrator is classical RK4. It is not symplectic: conservation is
//! what gets measured along the trajectories, so the scheme must not build
//! it in.

use thiserror::Error;

use super::space::{ConfigurationSpace, Hamiltonian, TIME};
use crate::expr::{Binding, EvalError, Expr};
use crate::scalar::Real;

/// `(dq^i/dt, dp_i/dt) = (d^i H, -d_i H)`, coordinates first.
pub fn hamilton_rhs(h: &Hamiltonian) -> Vec<Expr> {
    let s = h.space();
    let n = s.dimension();
    let mut rhs = Vec::with_capacity(2 * n);
    rhs.extend((0..n).map(|i| h.expr().differentiate(s.momentum(i))));
    rhs.extend((0..n).map(|i| -h.expr().differentiate(s.coordinate(i))));
    rhs
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("step size must be positive and finite")]
    BadStep,
    #[error("integration interval must satisfy t0 < t1")]
    BadInterval,
    #[error("initial value for `{0}` is missing")]
    MissingInitial(String),
    #[error("evaluation failed at step {step}: {source}")]
    Eval { step: usize, source: EvalError },
    #[error("state became non-finite at step {step}")]
    NonFinite { step: usize },
}

/// Uniformly spaced samples `(t_k, q_k, p_k)` of a solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    /// Sample times, strictly increasing.
    pub times: Vec<T>,
    /// Each state is `[q^1..q^n, p_1..p_n]`.
    pub states: Vec<Vec<T>>,
    pub dt: T,
    pub integrator: &'static str,
}

impl<T: Real> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_time(&self) -> T {
        *self
            .times
            .last()
            .expect("trajectory has at least one sample")
    }

    pub fn final_state(&self) -> &[T] {
        self.states
            .last()
            .expect("trajectory has at least one sample")
    }

    /// Time, phase coordinates and parameters at sample `k`.
    pub fn binding_at(&self, space: &ConfigurationSpace, k: usize) -> Binding<T> {
        let mut b = parameter_binding(space);
        fill_state(&mut b, space, self.times[k], &self.states[k]);
        b
    }
}

fn parameter_binding<T: Real>(space: &ConfigurationSpace) -> Binding<T> {
    space
        .parameters()
        .iter()
        .map(|(n, v)| (n.as_str(), T::lit(*v)))
        .collect()
}

fn fill_state<T: Real>(b: &mut Binding<T>, space: &ConfigurationSpace, t: T, y: &[T]) {
    let n = space.dimension();
    b.set(TIME, t);
    for i in 0..n {
        b.set(space.coordinate(i), y[i]);
        b.set(space.momentum(i), y[n + i]);
    }
}

struct Rhs<'a, T> {
    space: &'a ConfigurationSpace,
    exprs: Vec<Expr>,
    binding: Binding<T>,
}

impl<T: Real> Rhs<'_, T> {
    fn eval(&mut self, t: T, y: &[T], out: &mut [T]) -> Result<(), EvalError> {
        fill_state(&mut self.binding, self.space, t, y);
        for (slot, e) in out.iter_mut().zip(&self.exprs) {
            *slot = e.evaluate(&self.binding)?;
        }
        Ok(())
    }
}

/// Integrates the Hamilton equations with fixed-step RK4 from `t0` to the
/// grid time nearest `t1`.
///
/// `initial` must bind every coordinate and momentum; parameters come from
/// the Hamiltonian's space.
pub fn integrate<T: Real>(
    h: &Hamiltonian,
    initial: &Binding<T>,
    t0: T,
    t1: T,
    dt: T,
) -> Result<Trajectory<T>, IntegrateError> {
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(IntegrateError::BadStep);
    }
    if !(t1 > t0) {
        return Err(IntegrateError::BadInterval);
    }
    let space = h.space();
    let n = space.dimension();
    let mut y = Vec::with_capacity(2 * n);
    for name in space.coordinates().iter().chain(space.momenta()) {
        let v = initial
            .get(name)
            .ok_or_else(|| IntegrateError::MissingInitial(name.clone()))?;
        y.push(*v);
    }
    let steps = ((t1 - t0) / dt)
        .round()
        .to_usize()
        .ok_or(IntegrateError::BadStep)?
        .max(1);

    let mut rhs = Rhs {
        space,
        exprs: hamilton_rhs(h),
        binding: parameter_binding(space),
    };
    let dim = 2 * n;
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![T::zero(); dim],
        vec![T::zero(); dim],
        vec![T::zero(); dim],
        vec![T::zero(); dim],
    );
    let mut tmp = vec![T::zero(); dim];
    let half = T::lit(0.5);
    let sixth = T::lit(1.0 / 6.0);
    let two = T::lit(2.0);

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(t0);
    states.push(y.clone());

    for step in 1..=steps {
        let t = t0 + dt * T::from_usize(step - 1).unwrap();
        let err = |source| IntegrateError::Eval { step, source };
        rhs.eval(t, &y, &mut k1).map_err(err)?;
        for i in 0..dim {
            tmp[i] = y[i] + half * dt * k1[i];
        }
        rhs.eval(t + half * dt, &tmp, &mut k2).map_err(err)?;
        for i in 0..dim {
            tmp[i] = y[i] + half * dt * k2[i];
        }
        rhs.eval(t + half * dt, &tmp, &mut k3).map_err(err)?;
        for i in 0..dim {
            tmp[i] = y[i] + dt * k3[i];
        }
        rhs.eval(t + dt, &tmp, &mut k4).map_err(err)?;
        for i in 0..dim {
            y[i] = y[i] + sixth * dt * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(IntegrateError::NonFinite { step });
        }
        times.push(t0 + dt * T::from_usize(step).unwrap());
        states.push(y.clone());
    }

    Ok(Trajectory {
        times,
        states,
        dt,
        integrator: "rk4",
    })
}

/// Values of `f` at every sample of the trajectory.
pub fn series<T: Real>(
    traj: &Trajectory<T>,
    space: &ConfigurationSpace,
    f: &Expr,
) -> Result<Vec<T>, EvalError> {
    (0..traj.len())
        .map(|k| f.evaluate(&traj.binding_at(space, k)))
        .collect()
}

/// `max_k |f(state_k) - f(state_0)|`.
pub fn conservation_drift<T: Real>(
    traj: &Trajectory<T>,
    space: &ConfigurationSpace,
    f: &Expr,
) -> Result<T, EvalError> {
    let values = series(traj, space, f)?;
    let first = values[0];
    Ok(values
        .iter()
        .fold(T::zero(), |acc, v| acc.max((*v - first).abs())))
}
