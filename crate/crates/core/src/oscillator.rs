//! Harmonic-oscillator eigenbasis: Hermite functions on grids and truncated
//! Fock-space operators for `L = ½(p² + x²) = a⁺a + ½`.

use std::ops::Mul;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::grid::{Grid, GridFunction};

/// Largest index accepted by [`hermite_psi`].
pub const HERMITE_MAX_INDEX: usize = 200;

const RESCALE_ABOVE: f64 = 1e150;

/// Normalized Hermite functions `ψ₀(x)…ψ_{n_max}(x)` at one point.
///
/// Runs the recurrence `ψₖ₊₁ = √(2/(k+1))·xψₖ − √(k/(k+1))·ψₖ₋₁` on
/// mantissas with a separate logarithmic scale so neither the Gaussian
/// factor nor the polynomial growth over- or underflows.
pub fn hermite_values(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    let mut log_scale = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut scales = vec![0.0; n_max + 1];
    out[0] = cur;
    scales[0] = log_scale;
    for k in 0..n_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_ABOVE {
            let s = cur.abs();
            prev /= s;
            cur /= s;
            log_scale += s.ln();
        }
        out[k + 1] = cur;
        scales[k + 1] = log_scale;
    }
    for (v, s) in out.iter_mut().zip(&scales) {
        *v *= s.exp();
    }
    out
}

/// `ψₙ = Hₙ(x)e^{−x²/2}/√(2ⁿn!√π)` sampled on the grid.
pub fn hermite_psi(n: usize, grid: Grid) -> Result<GridFunction> {
    check_hermite_index(n)?;
    Ok(GridFunction::from_real_fn(grid, |x| hermite_values(n, x)[n]))
}

/// All Hermite functions up to `n_max` on the grid, computed in one sweep.
pub fn hermite_functions(n_max: usize, grid: Grid) -> Result<Vec<GridFunction>> {
    check_hermite_index(n_max)?;
    let table: Vec<Vec<f64>> = grid.points().map(|x| hermite_values(n_max, x)).collect();
    (0..=n_max)
        .map(|n| GridFunction::from_real(grid, table.iter().map(|row| row[n]).collect()))
        .collect()
}

fn check_hermite_index(n: usize) -> Result<()> {
    if n > HERMITE_MAX_INDEX {
        return Err(Error::invalid(format!(
            "Hermite index {n} exceeds the stability bound {HERMITE_MAX_INDEX}"
        )));
    }
    Ok(())
}

/// Coefficients `c₀…c_{M−1}` over the number states `|n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector(DVector<Complex64>);

impl FockVector {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("Fock vector needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::invalid("Fock coefficients must be finite"));
        }
        Ok(Self(DVector::from_vec(coeffs)))
    }

    /// Number state `|k⟩` in a truncation of size `m`.
    pub fn basis(m: usize, k: usize) -> Self {
        assert!(k < m, "basis index {k} outside truncation {m}");
        let mut v = DVector::zeros(m);
        v[k] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn zeros(m: usize) -> Self {
        Self(DVector::zeros(m))
    }

    pub fn truncation(&self) -> usize {
        self.0.len()
    }

    pub fn coeffs(&self) -> &[Complex64] {
        self.0.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<Complex64> {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.0.dotc(&other.0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn add(&self, other: &FockVector) -> Self {
        Self(&self.0 + &other.0)
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        assert_eq!(self.truncation(), other.truncation(), "truncation mismatch");
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Square matrix acting on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator(DMatrix<Complex64>);

impl FockOperator {
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::invalid(format!(
                "Fock operator must be square and nonempty, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self(matrix))
    }

    pub fn identity(m: usize) -> Self {
        Self(DMatrix::identity(m, m))
    }

    pub fn diagonal(entries: impl IntoIterator<Item = Complex64>) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_vec(entries.into_iter().collect())))
    }

    pub fn truncation(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        assert_eq!(self.truncation(), v.truncation(), "truncation mismatch");
        FockVector(&self.0 * &v.0)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.truncation());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(&self.0 * c)
    }

    pub fn add(&self, other: &FockOperator) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &FockOperator) -> Self {
        Self(&self.0 - &other.0)
    }

    /// Largest entry difference on the leading `block × block` submatrix.
    pub fn max_abs_diff_block(&self, other: &FockOperator, block: usize) -> f64 {
        let b = block.min(self.truncation()).min(other.truncation());
        let mut worst: f64 = 0.0;
        for i in 0..b {
            for j in 0..b {
                worst = worst.max((self.0[(i, j)] - other.0[(i, j)]).norm());
            }
        }
        worst
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        FockOperator(&self.0 * &rhs.0)
    }
}

/// Lowering `a`, raising `a⁺` and `L = a⁺a + ½` on the first `m` states.
pub struct Ladder {
    pub a: FockOperator,
    pub a_dag: FockOperator,
    pub l: FockOperator,
}

pub fn ladder_ops(m: usize) -> Result<Ladder> {
    if m < 2 {
        return Err(Error::invalid(format!("ladder operators need M ≥ 2, got {m}")));
    }
    let mut a_dag = DMatrix::zeros(m, m);
    for n in 0..m - 1 {
        a_dag[(n + 1, n)] = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    let a = a_dag.transpose();
    let l = FockOperator::diagonal((0..m).map(|n| Complex64::new(n as f64 + 0.5, 0.0)));
    Ok(Ladder {
        a: FockOperator(a),
        a_dag: FockOperator(a_dag),
        l,
    })
}

/// `iᵏ` without rounding.
pub(crate) fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `diag(iⁿ)` for `sign = +1`, `diag((−i)ⁿ)` for `sign = −1`.
pub fn fourier_op(m: usize, sign: i32) -> Result<FockOperator> {
    if m == 0 {
        return Err(Error::invalid("truncation must be positive"));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::invalid(format!("Fourier sign must be ±1, got {sign}")));
    }
    Ok(FockOperator::diagonal(
        (0..m as i64).map(|n| i_pow(sign as i64 * n)),
    ))
}

/// `diag((−1)ⁿ)`.
pub fn parity_op(m: usize) -> Result<FockOperator> {
    if m == 0 {
        return Err(Error::invalid("truncation must be positive"));
    }
    Ok(FockOperator::diagonal((0..m as i64).map(|n| i_pow(2 * n))))
}

/// `e^{−iφL} = diag(e^{−iφ(n+½)})`.
pub fn evolution_op(m: usize, phi: f64) -> Result<FockOperator> {
    if m == 0 {
        return Err(Error::invalid("truncation must be positive"));
    }
    Ok(FockOperator::diagonal(
        (0..m).map(|n| Complex64::from_polar(1.0, -phi * (n as f64 + 0.5))),
    ))
}

/// `Σ cₙψₙ(x)` on the grid.
pub fn fock_to_grid(v: &FockVector, grid: Grid) -> Result<GridFunction> {
    let m = v.truncation();
    check_hermite_index(m - 1)?;
    let c = v.coeffs();
    Ok(GridFunction::from_fn(grid, |x| {
        hermite_values(m - 1, x)
            .iter()
            .zip(c)
            .map(|(&psi, &cn)| cn * psi)
            .sum()
    }))
}
