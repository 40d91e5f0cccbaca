use num_complex::Complex;

use super::QuantumError;
use crate::scalar::Real;

/// Uniform interior grid on `(x_min, x_max)` with Dirichlet ends.
///
/// `m` interior points `x_j = x_min + (j + 1) h`, `h = (x_max - x_min) / (m + 1)`;
/// the wavefunction vanishes at `x_min` and `x_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    x_min: T,
    x_max: T,
    m: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(x_min: T, x_max: T, m: usize) -> Result<Self, QuantumError> {
        if m < 3 {
            return Err(QuantumError::GridTooSmall(m));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(QuantumError::GridBounds);
        }
        Ok(Grid { x_min, x_max, m })
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize(self.m + 1).unwrap()
    }

    pub fn point(&self, j: usize) -> T {
        self.x_min + self.spacing() * T::from_usize(j + 1).unwrap()
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.m).map(|j| self.point(j)).collect()
    }

    /// The `m + 1` cell midpoints; entry `k` sits between node `k - 1` and
    /// node `k`, counting the boundary nodes.
    pub fn midpoints(&self) -> Vec<T> {
        let h = self.spacing();
        let half = T::lit(0.5);
        (0..=self.m)
            .map(|k| self.x_min + h * (T::from_usize(k).unwrap() + half))
            .collect()
    }

    /// The grid with spacing halved and the same end points.
    pub fn refined(&self) -> Self {
        Grid {
            x_min: self.x_min,
            x_max: self.x_max,
            m: 2 * self.m + 1,
        }
    }

    /// Number of points on each side counted by [`WaveFunction::boundary_mass`].
    pub fn boundary_width(&self) -> usize {
        (self.m / 20).max(1)
    }
}

/// Complex grid function at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction<T> {
    pub grid: Grid<T>,
    pub t: T,
    pub values: Vec<Complex<T>>,
}

impl<T: Real> WaveFunction<T> {
    pub fn new(grid: Grid<T>, t: T, values: Vec<Complex<T>>) -> Result<Self, QuantumError> {
        if values.len() != grid.len() {
            return Err(QuantumError::LengthMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        Ok(WaveFunction { grid, t, values })
    }

    /// `exp(-(x - c)^2 / (4 s^2) + i k x)`, normalized on the grid, so that
    /// `|psi|^2` has standard deviation `s` in the continuum.
    pub fn gaussian(
        grid: Grid<T>,
        t: T,
        center: T,
        width: T,
        momentum: T,
    ) -> Result<Self, QuantumError> {
        if !(width > T::zero()) {
            return Err(QuantumError::ZeroNorm);
        }
        let four = T::lit(4.0);
        let values = grid
            .points()
            .into_iter()
            .map(|x| {
                let d = x - center;
                Complex::from_polar((-(d * d) / (four * width * width)).exp(), momentum * x)
            })
            .collect();
        WaveFunction { grid, t, values }.normalized()
    }

    /// `h * sum conj(a_j) b_j`.
    pub fn inner(&self, other: &WaveFunction<T>) -> Result<Complex<T>, QuantumError> {
        if self.grid != other.grid {
            return Err(QuantumError::GridMismatch);
        }
        Ok(inner_raw(self.grid.spacing(), &self.values, &other.values))
    }

    pub fn norm_sq(&self) -> T {
        self.grid.spacing() * self.values.iter().map(|z| z.norm_sqr()).sum::<T>()
    }

    pub fn normalized(mut self) -> Result<Self, QuantumError> {
        let n = self.norm_sq().sqrt();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(QuantumError::ZeroNorm);
        }
        for z in &mut self.values {
            *z = *z / n;
        }
        Ok(self)
    }

    /// Probability in the outer `grid.boundary_width()` points on each side;
    /// large values mean the Dirichlet walls are felt.
    pub fn boundary_mass(&self) -> T {
        let w = self.grid.boundary_width();
        let m = self.values.len();
        let edge: T = self.values[..w]
            .iter()
            .chain(&self.values[m - w..])
            .map(|z| z.norm_sqr())
            .sum();
        self.grid.spacing() * edge
    }
}

pub(crate) fn inner_raw<T: Real>(h: T, a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    let s: Complex<T> = a
        .iter()
        .zip(b)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| {
            acc + x.conj() * y
        });
    s * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_points() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        assert_eq!(g.spacing(), 0.25);
        assert_eq!(g.points(), vec![0.25, 0.5, 0.75]);
        assert_eq!(g.midpoints(), vec![0.125, 0.375, 0.625, 0.875]);
        assert_eq!(g.refined().spacing(), 0.125);
    }

    #[test]
    fn invalid_grids() {
        assert_eq!(Grid::new(0.0, 1.0, 2), Err(QuantumError::GridTooSmall(2)));
        assert_eq!(Grid::new(1.0, 1.0, 8), Err(QuantumError::GridBounds));
    }

    #[test]
    fn gaussian_is_normalized_and_centered() {
        let g = Grid::new(-12.0f64, 12.0, 512).unwrap();
        let psi = WaveFunction::gaussian(g, 0.0, 0.0, 1.0, 1.0).unwrap();
        assert!((psi.norm_sq() - 1.0).abs() < 1e-12);
        assert!(psi.boundary_mass() < 1e-10);
        let h = g.spacing();
        let mean: f64 = g
            .points()
            .iter()
            .zip(&psi.values)
            .map(|(x, z)| x * z.norm_sqr())
            .sum::<f64>()
            * h;
        assert!(mean.abs() < 1e-12);
        let var: f64 = g
            .points()
            .iter()
            .zip(&psi.values)
            .map(|(x, z)| x * x * z.norm_sqr())
            .sum::<f64>()
            * h;
        assert!((var - 1.0).abs() < 1e-8);
    }

    #[test]
    fn inner_product_checks_grid() {
        let a = Grid::new(-1.0f64, 1.0, 10).unwrap();
        let b = Grid::new(-1.0, 1.0, 11).unwrap();
        let pa = WaveFunction::gaussian(a, 0.0, 0.0, 0.3, 0.0).unwrap();
        let pb = WaveFunction::gaussian(b, 0.0, 0.0, 0.3, 0.0).unwrap();
        assert_eq!(pa.inner(&pb), Err(QuantumError::GridMismatch));
        assert!((pa.inner(&pa).unwrap().re - 1.0).abs() < 1e-14);
    }
}
