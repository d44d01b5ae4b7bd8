use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform grid on `[x_min, x_max]` with `n_points ≥ 3` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::invalid("grid bounds must be finite"));
        }
        if x_min >= x_max {
            return Err(Error::invalid(format!(
                "grid requires x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 3 {
            return Err(Error::invalid(format!(
                "grid requires at least 3 nodes, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Symmetric grid `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    /// Same nodes up to rounding in the bounds.
    pub fn matches(&self, other: &Grid) -> bool {
        let tol = 1e-12 * (self.x_max - self.x_min).abs().max(1.0);
        self.n_points == other.n_points
            && (self.x_min - other.x_min).abs() <= tol
            && (self.x_max - other.x_max).abs() <= tol
    }

    /// Validates that sampled abscissae form a uniform grid.
    pub fn from_samples(xs: &[f64]) -> Result<Self> {
        if xs.len() < 3 {
            return Err(Error::invalid("at least 3 samples are required"));
        }
        let grid = Self::new(xs[0], xs[xs.len() - 1], xs.len())?;
        let h = grid.spacing();
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.point(i)).abs() > 1e-6 * h {
                return Err(Error::invalid(format!(
                    "non-uniform grid: sample {i} at {x} expected {}",
                    grid.point(i)
                )));
            }
        }
        Ok(grid)
    }
}

/// Complex samples of a function, one per grid node.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

/// Imaginary parts below this (relative to the value) count as real.
const REAL_TOL: f64 = 1e-12;

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_real(grid: Grid, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, values.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_real(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.im.abs() <= REAL_TOL * v.re.abs().max(1.0))
    }

    /// Real parts, rejecting functions with a non-negligible imaginary part.
    pub fn real_values(&self) -> Result<Vec<f64>> {
        if let Some((i, v)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, v)| v.im.abs() > REAL_TOL * v.re.abs().max(1.0))
        {
            return Err(Error::invalid(format!(
                "complex value {v} at node {i} where a real function is required"
            )));
        }
        Ok(self.values.iter().map(|v| v.re).collect())
    }

    pub fn map(&self, f: impl Fn(f64, Complex64) -> Complex64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| f(self.grid.point(i), v))
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|_, v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    fn check_grid(&self, other: &GridFunction) -> Result<()> {
        if !self.grid.matches(&other.grid) {
            return Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(())
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(
        &self,
        other: &GridFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Self {
            grid: self.grid,
            values,
        })
    }

    pub fn sub(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &GridFunction) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Max-norm distance on nodes `margin..len-margin`.
    pub fn max_abs_diff(&self, other: &GridFunction, margin: usize) -> Result<f64> {
        self.check_grid(other)?;
        Ok(interior_max(
            &self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).norm())
                .collect::<Vec<_>>(),
            margin,
        ))
    }

    /// Ratio of the largest boundary magnitude to the overall maximum.
    pub fn boundary_ratio(&self) -> f64 {
        let max = self.max_abs();
        if max == 0.0 {
            return 0.0;
        }
        let n = self.values.len();
        self.values[0].norm().max(self.values[n - 1].norm()) / max
    }
}

/// Maximum of `values[margin..len-margin]` (zero when the range is empty).
pub fn interior_max(values: &[f64], margin: usize) -> f64 {
    if values.len() <= 2 * margin {
        return 0.0;
    }
    values[margin..values.len() - margin]
        .iter()
        .fold(0.0, |m, &v| if v.is_nan() { f64::NAN } else { m.max(v) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(Grid::new(1.0, 0.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_err());
        assert!(Grid::new(0.0, f64::INFINITY, 10).is_err());
    }

    #[test]
    fn spacing_and_endpoints() {
        let g = Grid::new(-1.0, 1.0, 5).unwrap();
        assert_eq!(g.spacing(), 0.5);
        assert_eq!(g.point(0), -1.0);
        assert_eq!(g.point(4), 1.0);
        assert_eq!(g.point(2), 0.0);
    }

    #[test]
    fn non_uniform_samples_rejected() {
        assert!(Grid::from_samples(&[0.0, 1.0, 2.0, 3.0]).is_ok());
        assert!(Grid::from_samples(&[0.0, 1.0, 2.5, 3.0]).is_err());
    }

    #[test]
    fn value_count_must_match() {
        let g = Grid::new(0.0, 1.0, 4).unwrap();
        assert!(GridFunction::from_real(g, vec![0.0; 3]).is_err());
    }

    #[test]
    fn real_values_rejects_complex() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        let f = GridFunction::from_fn(g, |x| Complex64::new(x, 0.5));
        assert!(f.real_values().is_err());
        let f = GridFunction::from_real_fn(g, |x| x);
        assert_eq!(f.real_values().unwrap(), vec![0.0, 0.5, 1.0]);
    }
}
