//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

use num_complex::Complex;

use super::grid::WaveFunction;
use super::operator::GridOperator;
use super::QuantumError;
use crate::scalar::{Real, Scalar};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues and the matching eigenvectors.
pub type Eigenpairs<T> = (Vec<T>, Vec<Vec<Complex<T>>>);

/// Eigenvalues (unsorted) and Euclidean-orthonormal eigenvectors of the
/// `m x m` row-major Hermitian matrix `a`; `vectors[k]` belongs to `values[k]`.
pub fn hermitian_eigen<T: Real>(
    mut a: Vec<Complex<T>>,
    m: usize,
) -> Result<Eigenpairs<T>, QuantumError> {
    assert_eq!(a.len(), m * m, "matrix must be m x m");
    let zero = Complex::new(T::zero(), T::zero());
    let mut v = vec![zero; m * m];
    for j in 0..m {
        v[j * m + j] = Complex::new(T::one(), T::zero());
    }
    let scale: T = a.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let target = T::epsilon() * scale;

    let mut converged = scale == T::zero();
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off: T = (0..m)
            .flat_map(|i| (0..m).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * m + j].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                rotate(&mut a, &mut v, m, p, q);
            }
        }
    }
    if !converged {
        return Err(QuantumError::NoConvergence(MAX_SWEEPS));
    }
    let values = (0..m).map(|j| a[j * m + j].re).collect();
    let vectors = (0..m)
        .map(|k| (0..m).map(|i| v[i * m + k]).collect())
        .collect();
    Ok((values, vectors))
}

/// Annihilates `a[p][q]` by `A <- G^H A G` with `G = diag(1, e^{-i phi}) R(theta)`
/// acting on rows and columns `p`, `q`.
fn rotate<T: Real>(a: &mut [Complex<T>], v: &mut [Complex<T>], m: usize, p: usize, q: usize) {
    let apq = a[p * m + q];
    let r = apq.norm();
    if r == T::zero() {
        return;
    }
    let phase = (apq / r).conj();
    let app = a[p * m + p].re;
    let aqq = a[q * m + q].re;
    let tau = (aqq - app) / (T::lit(2.0) * r);
    let sign = if tau < T::zero() { -T::one() } else { T::one() };
    let t = sign / (tau.abs() + (T::one() + tau * tau).sqrt());
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    let g_pp = Complex::new(c, T::zero());
    let g_pq = Complex::new(s, T::zero());
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    for k in 0..m {
        let (x, y) = (a[k * m + p], a[k * m + q]);
        a[k * m + p] = x * g_pp + y * g_qp;
        a[k * m + q] = x * g_pq + y * g_qq;
        let (x, y) = (v[k * m + p], v[k * m + q]);
        v[k * m + p] = x * g_pp + y * g_qp;
        v[k * m + q] = x * g_pq + y * g_qq;
    }
    for k in 0..m {
        let (x, y) = (a[p * m + k], a[q * m + k]);
        a[p * m + k] = g_pp.conj() * x + g_qp.conj() * y;
        a[q * m + k] = g_pq.conj() * x + g_qq.conj() * y;
    }
    let zero = Complex::new(T::zero(), T::zero());
    a[p * m + q] = zero;
    a[q * m + p] = zero;
    a[p * m + p].im = T::zero();
    a[q * m + q].im = T::zero();
}

/// Eigenpair of a grid Hamiltonian, the state normalized with measure `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryState<T> {
    pub energy: T,
    pub state: WaveFunction<T>,
}

/// The `count` eigenpairs of smallest `|E|`, in that order.
pub fn stationary_states<T: Real>(
    op: &GridOperator<T>,
    count: usize,
) -> Result<Vec<StationaryState<T>>, QuantumError> {
    let m = op.dim();
    if count > m {
        return Err(QuantumError::TooManyStates { count, dim: m });
    }
    let defect = op.hermitian_defect();
    if defect > T::epsilon() * T::lit(1000.0) * (T::one() + op.max_abs()) {
        return Err(QuantumError::NotHermitian(Scalar::to_f64(&defect)));
    }
    let (values, vectors) = hermitian_eigen(op.to_dense(), m)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|i, j| values[*i].abs().partial_cmp(&values[*j].abs()).unwrap());
    let inv = T::one() / op.grid.spacing().sqrt();
    order
        .into_iter()
        .take(count)
        .map(|k| {
            let values_k = vectors[k].iter().map(|z| z * inv).collect();
            Ok(StationaryState {
                energy: values[k],
                state: WaveFunction::new(op.grid, op.t, values_k)?,
            })
        })
        .collect()
}
