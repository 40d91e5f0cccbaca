//! Crank–Nicolson integration of `i d_t psi = H^(t) psi` and mean values
//! along the evolution.

use num_complex::Complex;

use super::grid::WaveFunction;
use super::operator::{
    expectation, quantize_affine, quantize_hamiltonian, AffineObservable, GridOperator,
    QuadraticHamiltonian,
};
use super::QuantumError;
use crate::classical::{ProjectableField, TIME};
use crate::expr::Expr;
use crate::scalar::Real;

/// Number of steps of size `dt` nearest to `t1 - t0`.
fn step_count<T: Real>(t0: T, t1: T, dt: T) -> Result<usize, QuantumError> {
    if !(dt > T::zero()) || !dt.is_finite() || !(t1 > t0) {
        return Err(QuantumError::BadStep);
    }
    Ok(((t1 - t0) / dt)
        .round()
        .to_usize()
        .ok_or(QuantumError::BadStep)?
        .max(1))
}

/// Solves the tridiagonal system `M x = d` in place of `d`.
fn thomas<T: Real>(
    lower: &[Complex<T>],
    diag: &[Complex<T>],
    upper: &[Complex<T>],
    d: &mut [Complex<T>],
    scratch: &mut [Complex<T>],
) -> Option<()> {
    let m = diag.len();
    let ok = |z: Complex<T>| z.norm_sqr() > T::zero() && z.re.is_finite() && z.im.is_finite();
    if !ok(diag[0]) {
        return None;
    }
    scratch[0] = if m > 1 {
        upper[0] / diag[0]
    } else {
        Complex::new(T::zero(), T::zero())
    };
    d[0] = d[0] / diag[0];
    for j in 1..m {
        let denom = diag[j] - lower[j - 1] * scratch[j - 1];
        if !ok(denom) {
            return None;
        }
        if j + 1 < m {
            scratch[j] = upper[j] / denom;
        }
        d[j] = (d[j] - lower[j - 1] * d[j - 1]) / denom;
    }
    for j in (0..m - 1).rev() {
        d[j] = d[j] - scratch[j] * d[j + 1];
    }
    Some(())
}

/// Propagates `psi0` from its own time to the step nearest `t1`, calling
/// `observe` on the initial state and after every step.
pub fn evolve_with<T, F>(
    psi0: &WaveFunction<T>,
    h: &QuadraticHamiltonian,
    t1: T,
    dt: T,
    mut observe: F,
) -> Result<(), QuantumError>
where
    T: Real,
    F: FnMut(usize, &WaveFunction<T>) -> Result<(), QuantumError>,
{
    let t0 = psi0.t;
    let steps = step_count(t0, t1, dt)?;
    let grid = psi0.grid;
    let half_dt = Complex::new(T::zero(), dt * T::lit(0.5));
    let fixed = if h.is_time_dependent() {
        None
    } else {
        Some(quantize_hamiltonian(h, &grid, t0)?)
    };

    let mut psi = psi0.clone();
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    let one = Complex::new(T::one(), T::zero());
    observe(0, &psi)?;
    for step in 1..=steps {
        let t_mid = t0 + dt * (T::from_usize(step - 1).unwrap() + T::lit(0.5));
        let built;
        let op = match &fixed {
            Some(op) => op,
            None => {
                built = quantize_hamiltonian(h, &grid, t_mid)?;
                &built
            }
        };
        // (I + i dt/2 H) psi' = (I - i dt/2 H) psi
        let hpsi = op.apply(&psi.values);
        let mut rhs: Vec<_> = psi
            .values
            .iter()
            .zip(&hpsi)
            .map(|(v, w)| v - half_dt * w)
            .collect();
        let lower: Vec<_> = op.lower.iter().map(|z| half_dt * z).collect();
        let upper: Vec<_> = op.upper.iter().map(|z| half_dt * z).collect();
        let diag: Vec<_> = op.diag.iter().map(|z| one + half_dt * z).collect();
        thomas(&lower, &diag, &upper, &mut rhs, &mut scratch)
            .ok_or(QuantumError::SingularSolve { step })?;
        psi.values = rhs;
        psi.t = t0 + dt * T::from_usize(step).unwrap();
        observe(step, &psi)?;
    }
    Ok(())
}

/// All snapshots of the evolution, initial state included.
pub fn evolve<T: Real>(
    psi0: &WaveFunction<T>,
    h: &QuadraticHamiltonian,
    t1: T,
    dt: T,
) -> Result<Vec<WaveFunction<T>>, QuantumError> {
    let mut out = Vec::new();
    evolve_with(psi0, h, t1, dt, |_, psi| {
        out.push(psi.clone());
        Ok(())
    })?;
    Ok(out)
}

/// `u^t H^ - (u^1 p_1)^` at time `t`.
pub fn noether_operator<T: Real>(
    u: &ProjectableField,
    h: &QuadraticHamiltonian,
    grid: &super::Grid<T>,
    t: T,
) -> Result<GridOperator<T>, QuantumError> {
    let space = h.space();
    let transport = AffineObservable::new(space, 0, u.components()[0].clone(), Expr::zero())?;
    let momentum = quantize_affine(space, &transport, grid, t)?;
    let minus_one = Complex::new(-T::one(), T::zero());
    if u.is_connection() {
        quantize_hamiltonian(h, grid, t)?.add(&momentum.scale(minus_one))
    } else {
        Ok(momentum.scale(minus_one))
    }
}

/// An operator whose mean is tracked during evolution.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// Spatial part of an affine observable.
    Affine(AffineObservable),
    /// The quantized Noether function of a field.
    Noether(ProjectableField),
    /// The Hamiltonian itself.
    Energy,
}

impl Observable {
    pub fn operator<T: Real>(
        &self,
        h: &QuadraticHamiltonian,
        grid: &super::Grid<T>,
        t: T,
    ) -> Result<GridOperator<T>, QuantumError> {
        match self {
            Observable::Affine(f) => quantize_affine(h.space(), f, grid, t),
            Observable::Noether(u) => noether_operator(u, h, grid, t),
            Observable::Energy => quantize_hamiltonian(h, grid, t),
        }
    }

    fn is_time_dependent(&self, h: &QuadraticHamiltonian) -> bool {
        match self {
            Observable::Affine(f) => f.a.depends_on(TIME) || f.b.depends_on(TIME),
            Observable::Noether(u) => {
                u.components()[0].depends_on(TIME) || (u.is_connection() && h.is_time_dependent())
            }
            Observable::Energy => h.is_time_dependent(),
        }
    }
}

/// Time series of norm, boundary mass and observable means.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSeries<T> {
    pub times: Vec<T>,
    pub norms: Vec<T>,
    pub boundary_mass: Vec<T>,
    /// `means[i][k]`: real part of observable `i` at sample `k`.
    pub means: Vec<Vec<T>>,
    /// Largest imaginary part seen in any mean.
    pub max_imag: T,
}

impl<T: Real> MeanSeries<T> {
    /// `max_k |x_k - x_0|`.
    pub fn drift(values: &[T]) -> T {
        let first = values[0];
        values
            .iter()
            .fold(T::zero(), |acc, v| acc.max((*v - first).abs()))
    }

    pub fn mean_drift(&self, i: usize) -> T {
        Self::drift(&self.means[i])
    }

    pub fn norm_drift(&self) -> T {
        Self::drift(&self.norms)
    }

    pub fn max_boundary_mass(&self) -> T {
        self.boundary_mass.iter().fold(T::zero(), |a, b| a.max(*b))
    }
}

/// Evolves `psi0` and records means of `observables` every `every` steps
/// and at the final step.
pub fn mean_series<T: Real>(
    psi0: &WaveFunction<T>,
    h: &QuadraticHamiltonian,
    observables: &[Observable],
    t1: T,
    dt: T,
    every: usize,
) -> Result<MeanSeries<T>, QuantumError> {
    let every = every.max(1);
    let steps = step_count(psi0.t, t1, dt)?;
    let grid = psi0.grid;
    let fixed: Vec<Option<GridOperator<T>>> = observables
        .iter()
        .map(|o| {
            if o.is_time_dependent(h) {
                Ok(None)
            } else {
                o.operator(h, &grid, psi0.t).map(Some)
            }
        })
        .collect::<Result<_, _>>()?;
    let mut series = MeanSeries {
        times: Vec::new(),
        norms: Vec::new(),
        boundary_mass: Vec::new(),
        means: vec![Vec::new(); observables.len()],
        max_imag: T::zero(),
    };
    evolve_with(psi0, h, t1, dt, |step, psi| {
        if step % every != 0 && step != steps {
            return Ok(());
        }
        series.times.push(psi.t);
        series.norms.push(psi.norm_sq().sqrt());
        series.boundary_mass.push(psi.boundary_mass());
        for (i, o) in observables.iter().enumerate() {
            let z = match &fixed[i] {
                Some(op) => expectation(psi, op)?,
                None => expectation(psi, &o.operator(h, &grid, psi.t)?)?,
            };
            series.max_imag = series.max_imag.max(z.im.abs());
            series.means[i].push(z.re);
        }
        Ok(())
    })?;
    Ok(series)
}

/// `max_k |<T_u>(t_k) - <T_u>(t_0)|` along the evolution of `psi0`, with
/// the Noether operator rebuilt at every step.
pub fn noether_mean_drift<T: Real>(
    u: &ProjectableField,
    h: &QuadraticHamiltonian,
    psi0: &WaveFunction<T>,
    t1: T,
    dt: T,
) -> Result<T, QuantumError> {
    let s = mean_series(psi0, h, &[Observable::Noether(u.clone())], t1, dt, 1)?;
    Ok(s.mean_drift(0))
}
