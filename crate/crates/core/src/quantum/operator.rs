//! Grid quantization of affine observables and quadratic Hamiltonians.
//!
//! `a p + b` is represented by `-(i/2)(a D + D a) + b`, with `D` the central
//! difference under Dirichlet ends. In the continuum this is
//! `-i a d/dx - (i/2) a' + b`; on the grid it is exactly Hermitian.
//! The `p^2` part of a Hamiltonian uses the divergence-form second
//! difference with its coefficient sampled at cell midpoints.

use num_complex::Complex;

use super::grid::{inner_raw, Grid, WaveFunction};
use super::QuantumError;
use crate::classical::{
    ConfigurationSpace, Hamiltonian, SymmetryCheck, HOMOGENEOUS_MOMENTUM, TIME,
};
use crate::expr::{probabilistic_equal, Binding, Expr};
use crate::scalar::{Real, Scalar};

/// `a^t p + a(t, q) p_1 + b(t, q)` on a one-dimensional configuration space.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineObservable {
    pub at: i64,
    pub a: Expr,
    pub b: Expr,
}

impl AffineObservable {
    pub fn new(
        space: &ConfigurationSpace,
        at: i64,
        a: Expr,
        b: Expr,
    ) -> Result<Self, QuantumError> {
        require_1d(space)?;
        if at != 0 && at != 1 {
            return Err(QuantumError::TimeComponent(at));
        }
        for e in [&a, &b] {
            if space.depends_on_momenta(e) {
                return Err(QuantumError::NotAffine(e.to_string()));
            }
        }
        Ok(AffineObservable { at, a, b })
    }

    /// The multiplication operator by `b(t, q)`.
    pub fn function(b: Expr) -> Self {
        AffineObservable {
            at: 0,
            a: Expr::zero(),
            b,
        }
    }

    /// Splits `f` into `a^t p + a p_1 + b` by differentiation and checks by
    /// sampling that `f` really is of that form.
    pub fn from_phase_function(
        space: &ConfigurationSpace,
        f: &Expr,
        check: &SymmetryCheck,
    ) -> Result<Self, QuantumError> {
        let parts = Self::decompose(space, f)?;
        let domain = space.sample_domain(check);
        let rebuilt = parts.expr(space);
        let ok = probabilistic_equal(&rebuilt, f, &domain, check.samples, check.tol, check.seed)?;
        if !ok {
            return Err(QuantumError::NotAffine(f.to_string()));
        }
        Ok(parts)
    }

    /// Coefficient extraction without the affinity check.
    pub fn decompose(space: &ConfigurationSpace, f: &Expr) -> Result<Self, QuantumError> {
        require_1d(space)?;
        let p1 = space.momentum(0);
        let at_expr = f.differentiate(HOMOGENEOUS_MOMENTUM);
        let at = if at_expr.is_zero() {
            0
        } else if at_expr.is_one() {
            1
        } else {
            return Err(QuantumError::NotAffine(f.to_string()));
        };
        let at_momentum_zero = |e: &Expr| {
            e.substitute_one(p1, &Expr::zero())
                .substitute_one(HOMOGENEOUS_MOMENTUM, &Expr::zero())
        };
        let a = at_momentum_zero(&f.differentiate(p1));
        let b = at_momentum_zero(f);
        Self::new(space, at, a, b)
    }

    /// `a^t p + a p_1 + b` as a phase-space expression.
    pub fn expr(&self, space: &ConfigurationSpace) -> Expr {
        Expr::int(self.at) * Expr::var(HOMOGENEOUS_MOMENTUM)
            + &self.a * Expr::var(space.momentum(0))
            + &self.b
    }
}

/// `H = g p^2 / 2 + A p + V`, coefficients functions of `(t, q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    space: ConfigurationSpace,
    pub g: Expr,
    pub a: Expr,
    pub v: Expr,
}

impl QuadraticHamiltonian {
    /// Reads off `g`, `A`, `V` from a classical Hamiltonian of momentum
    /// degree at most two.
    pub fn from_hamiltonian(h: &Hamiltonian, check: &SymmetryCheck) -> Result<Self, QuantumError> {
        let space = h.space();
        require_1d(space)?;
        let p1 = space.momentum(0);
        let at_zero = |e: &Expr| e.substitute_one(p1, &Expr::zero());
        let dh = h.expr().differentiate(p1);
        let q = QuadraticHamiltonian {
            space: space.clone(),
            g: at_zero(&dh.differentiate(p1)),
            a: at_zero(&dh),
            v: at_zero(h.expr()),
        };
        let domain = space.sample_domain(check);
        if !probabilistic_equal(
            &q.expr(),
            h.expr(),
            &domain,
            check.samples,
            check.tol,
            check.seed,
        )? {
            return Err(QuantumError::NotQuadratic(h.expr().to_string()));
        }
        Ok(q)
    }

    pub fn space(&self) -> &ConfigurationSpace {
        &self.space
    }

    pub fn expr(&self) -> Expr {
        let p1 = Expr::var(self.space.momentum(0));
        &self.g * p1.pow(2) / Expr::int(2) + &self.a * &p1 + &self.v
    }

    pub fn is_time_dependent(&self) -> bool {
        [&self.g, &self.a, &self.v]
            .iter()
            .any(|e| e.depends_on(TIME))
    }
}

fn require_1d(space: &ConfigurationSpace) -> Result<(), QuantumError> {
    if space.dimension() != 1 {
        return Err(QuantumError::Dimension(space.dimension()));
    }
    Ok(())
}

/// Tridiagonal complex matrix on a grid, built at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOperator<T> {
    pub grid: Grid<T>,
    pub t: T,
    /// `lower[j] = M[j + 1][j]`
    pub lower: Vec<Complex<T>>,
    pub diag: Vec<Complex<T>>,
    /// `upper[j] = M[j][j + 1]`
    pub upper: Vec<Complex<T>>,
}

impl<T: Real> GridOperator<T> {
    pub fn zeros(grid: Grid<T>, t: T) -> Self {
        let m = grid.len();
        let z = Complex::new(T::zero(), T::zero());
        GridOperator {
            grid,
            t,
            lower: vec![z; m - 1],
            diag: vec![z; m],
            upper: vec![z; m - 1],
        }
    }

    pub fn identity(grid: Grid<T>, t: T) -> Self {
        let mut op = Self::zeros(grid, t);
        op.diag.fill(Complex::new(T::one(), T::zero()));
        op
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let m = self.dim();
        (0..m)
            .map(|j| {
                let mut y = self.diag[j] * x[j];
                if j > 0 {
                    y = y + self.lower[j - 1] * x[j - 1];
                }
                if j + 1 < m {
                    y = y + self.upper[j] * x[j + 1];
                }
                y
            })
            .collect()
    }

    pub fn add(&self, other: &GridOperator<T>) -> Result<Self, QuantumError> {
        if self.grid != other.grid {
            return Err(QuantumError::GridMismatch);
        }
        let zip =
            |a: &[Complex<T>], b: &[Complex<T>]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Ok(GridOperator {
            grid: self.grid,
            t: self.t,
            lower: zip(&self.lower, &other.lower),
            diag: zip(&self.diag, &other.diag),
            upper: zip(&self.upper, &other.upper),
        })
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let s = |v: &[Complex<T>]| v.iter().map(|x| x * c).collect();
        GridOperator {
            grid: self.grid,
            t: self.t,
            lower: s(&self.lower),
            diag: s(&self.diag),
            upper: s(&self.upper),
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<Complex<T>> {
        let m = self.dim();
        let mut d = vec![Complex::new(T::zero(), T::zero()); m * m];
        for j in 0..m {
            d[j * m + j] = self.diag[j];
            if j + 1 < m {
                d[j * m + j + 1] = self.upper[j];
                d[(j + 1) * m + j] = self.lower[j];
            }
        }
        d
    }

    /// `max |M_ij - conj(M_ji)|`.
    pub fn hermitian_defect(&self) -> T {
        let diag = self.diag.iter().map(|z| z.im.abs());
        let off = self
            .upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| (u - l.conj()).norm());
        diag.chain(off).fold(T::zero(), T::max)
    }

    pub fn max_abs(&self) -> T {
        self.lower
            .iter()
            .chain(&self.diag)
            .chain(&self.upper)
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }
}

fn binding_for<T: Real>(space: &ConfigurationSpace, t: T) -> Binding<T> {
    let mut b: Binding<T> = space
        .parameters()
        .iter()
        .map(|(n, v)| (n.as_str(), T::lit(*v)))
        .collect();
    b.set(TIME, t);
    b
}

/// Samples a coefficient `c(t, q)` at the given abscissae.
pub fn sample_coefficient<T: Real>(
    space: &ConfigurationSpace,
    c: &Expr,
    xs: &[T],
    t: T,
) -> Result<Vec<T>, QuantumError> {
    let q = space.coordinate(0);
    let mut b = binding_for(space, t);
    let finite = |v: T| {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuantumError::NonFinite(c.to_string()))
        }
    };
    if !c.depends_on(q) {
        let v = finite(c.evaluate(&b)?)?;
        return Ok(vec![v; xs.len()]);
    }
    xs.iter()
        .map(|x| {
            b.set(q, *x);
            finite(c.evaluate(&b)?)
        })
        .collect()
}

fn add_split_transport<T: Real>(op: &mut GridOperator<T>, a: &[T]) {
    // -(i/2)(aD + Da): (j, j+1) -> -i (a_j + a_{j+1}) / 4h, (j+1, j) its conjugate
    let h = op.grid.spacing();
    let four_h = T::lit(4.0) * h;
    for j in 0..op.dim() - 1 {
        let w = (a[j] + a[j + 1]) / four_h;
        op.upper[j] = op.upper[j] + Complex::new(T::zero(), -w);
        op.lower[j] = op.lower[j] + Complex::new(T::zero(), w);
    }
}

fn add_diagonal<T: Real>(op: &mut GridOperator<T>, v: &[T]) {
    for (d, x) in op.diag.iter_mut().zip(v) {
        *d = *d + Complex::new(*x, T::zero());
    }
}

/// Spatial part of the operator of `a^t p + a p_1 + b` at time `t`; the
/// `-i a^t d/dt` piece belongs to the evolution equation and is not built.
pub fn quantize_affine<T: Real>(
    space: &ConfigurationSpace,
    f: &AffineObservable,
    grid: &Grid<T>,
    t: T,
) -> Result<GridOperator<T>, QuantumError> {
    require_1d(space)?;
    let xs = grid.points();
    let mut op = GridOperator::zeros(*grid, t);
    if !f.a.is_zero() {
        add_split_transport(&mut op, &sample_coefficient(space, &f.a, &xs, t)?);
    }
    add_diagonal(&mut op, &sample_coefficient(space, &f.b, &xs, t)?);
    Ok(op)
}

/// The pointwise stencil `-i a_j (psi_{j+1} - psi_{j-1}) / 2h - (i/2) a'_j + b_j`.
///
/// Consistent with the same continuum operator as [`quantize_affine`] but
/// only Hermitian up to `O(h)` for non-constant `a`.
pub fn quantize_affine_pointwise<T: Real>(
    space: &ConfigurationSpace,
    f: &AffineObservable,
    grid: &Grid<T>,
    t: T,
) -> Result<GridOperator<T>, QuantumError> {
    require_1d(space)?;
    let xs = grid.points();
    let a = sample_coefficient(space, &f.a, &xs, t)?;
    let da = sample_coefficient(space, &f.a.differentiate(space.coordinate(0)), &xs, t)?;
    let b = sample_coefficient(space, &f.b, &xs, t)?;
    let two_h = T::lit(2.0) * grid.spacing();
    let half = T::lit(0.5);
    let mut op = GridOperator::zeros(*grid, t);
    for j in 0..op.dim() {
        op.diag[j] = Complex::new(b[j], -half * da[j]);
        if j + 1 < op.dim() {
            op.upper[j] = Complex::new(T::zero(), -a[j] / two_h);
            op.lower[j] = Complex::new(T::zero(), a[j + 1] / two_h);
        }
    }
    Ok(op)
}

/// `g p^2 / 2 + A p + V` at time `t`.
pub fn quantize_hamiltonian<T: Real>(
    h: &QuadraticHamiltonian,
    grid: &Grid<T>,
    t: T,
) -> Result<GridOperator<T>, QuantumError> {
    let space = h.space();
    let xs = grid.points();
    let mut op = GridOperator::zeros(*grid, t);
    if !h.g.is_zero() {
        // -(1/2) D_g with D_g psi_j = [g_{j+1/2}(psi_{j+1} - psi_j) - g_{j-1/2}(psi_j - psi_{j-1})] / h^2
        let g = sample_coefficient(space, &h.g, &grid.midpoints(), t)?;
        let two_h2 = T::lit(2.0) * grid.spacing() * grid.spacing();
        for j in 0..op.dim() {
            op.diag[j] = op.diag[j] + Complex::new((g[j] + g[j + 1]) / two_h2, T::zero());
            if j + 1 < op.dim() {
                let w = Complex::new(-g[j + 1] / two_h2, T::zero());
                op.upper[j] = op.upper[j] + w;
                op.lower[j] = op.lower[j] + w;
            }
        }
    }
    if !h.a.is_zero() {
        add_split_transport(&mut op, &sample_coefficient(space, &h.a, &xs, t)?);
    }
    if !h.v.is_zero() {
        add_diagonal(&mut op, &sample_coefficient(space, &h.v, &xs, t)?);
    }
    Ok(op)
}

/// `h * psi^H op psi`.
pub fn expectation<T: Real>(
    psi: &WaveFunction<T>,
    op: &GridOperator<T>,
) -> Result<Complex<T>, QuantumError> {
    if psi.grid != op.grid {
        return Err(QuantumError::GridMismatch);
    }
    Ok(inner_raw(
        psi.grid.spacing(),
        &psi.values,
        &op.apply(&psi.values),
    ))
}

/// Real part of [`expectation`], refusing values whose imaginary part
/// exceeds `imag_tol`.
pub fn real_expectation<T: Real>(
    psi: &WaveFunction<T>,
    op: &GridOperator<T>,
    imag_tol: T,
) -> Result<T, QuantumError> {
    let z = expectation(psi, op)?;
    if z.im.abs() > imag_tol {
        return Err(QuantumError::ComplexMean(Scalar::to_f64(&z.im)));
    }
    Ok(z.re)
}

/// `|<op psi, psi> - <psi, op psi>|`.
pub fn hermiticity_residual<T: Real>(
    op: &GridOperator<T>,
    psi: &WaveFunction<T>,
) -> Result<T, QuantumError> {
    if psi.grid != op.grid {
        return Err(QuantumError::GridMismatch);
    }
    let h = psi.grid.spacing();
    let f = op.apply(&psi.values);
    Ok((inner_raw(h, &f, &psi.values) - inner_raw(h, &psi.values, &f)).norm())
}
