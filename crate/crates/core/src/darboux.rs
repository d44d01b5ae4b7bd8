//! Darboux/Crum transformations over exponential-sum seeds.
//!
//! A chain of Hamiltonians `Lⱼ = Aⱼ⁺Aⱼ + λⱼ` with `Aⱼ = ∂ₓ + fⱼ` is encoded by
//! tau functions: `fⱼ = −∂ₓ log(τⱼ₊₁/τⱼ)` and `uⱼ = −2∂ₓ² log τⱼ` over a
//! constant base. Wavefunction maps use fourth-order central differences.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::diff::{derivative, second_derivative, BOUNDARY_LAYERS};
use crate::numerics::expsum::ExpSum;
use crate::numerics::grid::{interior_max, Grid, GridFunction};

/// `e^{gauss·x²}` times an exponential sum.
///
/// The Gaussian factor lets oscillator-type chains (`fⱼ = x`) be written in
/// the same form as soliton chains.
#[derive(Debug, Clone, PartialEq)]
pub struct TauFunction {
    sum: ExpSum,
    gauss: f64,
}

impl TauFunction {
    pub fn new(sum: ExpSum) -> Self {
        Self { sum, gauss: 0.0 }
    }

    pub fn with_gauss(sum: ExpSum, gauss: f64) -> Self {
        Self { sum, gauss }
    }

    pub fn sum(&self) -> &ExpSum {
        &self.sum
    }

    pub fn gauss(&self) -> f64 {
        self.gauss
    }

    /// `τ(x) = mantissa·e^{shift}`.
    pub fn eval_scaled(&self, x: f64) -> (Complex64, f64) {
        let (m, s) = self.sum.eval_scaled(x);
        (m, s + self.gauss * x * x)
    }

    /// `(d/dx)ᵏ log τ` for `k = 1..=order`.
    pub fn log_derivatives(&self, x: f64, order: usize) -> Vec<Complex64> {
        let mut k = self.sum.log_derivatives(x, order);
        if order >= 1 {
            k[0] += 2.0 * self.gauss * x;
        }
        if order >= 2 {
            k[1] += 2.0 * self.gauss;
        }
        k
    }

    /// Fails with the first node where `τ` vanishes or changes sign.
    pub fn check_nonvanishing(&self, grid: &Grid) -> Result<()> {
        if self.sum.is_zero() {
            return Err(Error::DegenerateSeeds);
        }
        let mut sign = 0.0;
        for (i, x) in grid.points().enumerate() {
            let (m, _) = self.eval_scaled(x);
            let s = m.re.signum();
            if m.re == 0.0 || !m.re.is_finite() || (sign != 0.0 && s != sign) {
                return Err(Error::Singular { index: i, x });
            }
            sign = s;
        }
        Ok(())
    }
}

impl From<ExpSum> for TauFunction {
    fn from(sum: ExpSum) -> Self {
        Self::new(sum)
    }
}

/// Consecutive tau functions `τⱼ, τⱼ₊₁` and the factorization constant `λⱼ`.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub tau_j: TauFunction,
    pub tau_j1: TauFunction,
    pub lambda_j: f64,
}

impl ChainState {
    pub fn new(tau_j: impl Into<TauFunction>, tau_j1: impl Into<TauFunction>, lambda_j: f64) -> Self {
        Self {
            tau_j: tau_j.into(),
            tau_j1: tau_j1.into(),
            lambda_j,
        }
    }

    /// `fⱼ(x)` and `fⱼ'(x)`, exact.
    pub fn f_with_derivative(&self, x: f64) -> (Complex64, Complex64) {
        let a = self.tau_j.log_derivatives(x, 2);
        let b = self.tau_j1.log_derivatives(x, 2);
        (a[0] - b[0], a[1] - b[1])
    }

    /// `fⱼ² − fⱼ' + λⱼ`, the potential of `Lⱼ`.
    pub fn lower_potential(&self, x: f64) -> Complex64 {
        let (f, fp) = self.f_with_derivative(x);
        f * f - fp + self.lambda_j
    }

    /// `fⱼ² + fⱼ' + λⱼ`, the potential of `Lⱼ₊₁`.
    pub fn upper_potential(&self, x: f64) -> Complex64 {
        let (f, fp) = self.f_with_derivative(x);
        f * f + fp + self.lambda_j
    }

    pub fn check(&self, grid: &Grid) -> Result<()> {
        self.tau_j.check_nonvanishing(grid)?;
        self.tau_j1.check_nonvanishing(grid)
    }
}

/// `fⱼ = −∂ₓ log(τⱼ₊₁/τⱼ)` sampled on the grid.
pub fn chain_f(state: &ChainState, grid: Grid) -> Result<GridFunction> {
    state.check(&grid)?;
    Ok(GridFunction::from_fn(grid, |x| state.f_with_derivative(x).0))
}

/// `u = base − 2∂ₓ² log W(seeds)`.
#[derive(Debug, Clone)]
pub struct CrumPotential {
    base_u: f64,
    wronskian: ExpSum,
}

impl CrumPotential {
    pub fn wronskian(&self) -> &ExpSum {
        &self.wronskian
    }

    pub fn base(&self) -> f64 {
        self.base_u
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.base_u - 2.0 * self.wronskian.log_derivatives(x, 2)[1]
    }

    /// Samples on the grid, rejecting grids where `W` vanishes.
    pub fn sample(&self, grid: Grid) -> Result<GridFunction> {
        TauFunction::new(self.wronskian.clone()).check_nonvanishing(&grid)?;
        Ok(GridFunction::from_fn(grid, |x| self.eval(x)))
    }
}

pub fn crum_potential(seeds: &[ExpSum], base_u: f64) -> Result<CrumPotential> {
    let wronskian = ExpSum::wronskian(seeds)?;
    if wronskian.is_zero() {
        return Err(Error::DegenerateSeeds);
    }
    Ok(CrumPotential { base_u, wronskian })
}

/// `max |fⱼ' + fⱼ₊₁' + fⱼ² − fⱼ₊₁² − μⱼ|` over interior nodes.
pub fn chain_residual(f_j: &GridFunction, f_j1: &GridFunction, mu_j: f64) -> Result<f64> {
    f_j.sub(f_j1)?;
    let h = f_j.grid().spacing();
    let dj = derivative(f_j.values(), h);
    let dj1 = derivative(f_j1.values(), h);
    let r: Vec<f64> = (0..f_j.len())
        .map(|i| {
            let a = f_j.values()[i];
            let b = f_j1.values()[i];
            (dj[i] + dj1[i] + a * a - b * b - mu_j).norm()
        })
        .collect();
    Ok(interior_max(&r, BOUNDARY_LAYERS))
}

/// `Aⱼψ = (∂ₓ + f)ψ`.
pub fn darboux_map(psi: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    let d = derivative(psi.values(), psi.grid().spacing());
    let dpsi = GridFunction::new(*psi.grid(), d)?;
    dpsi.add(&f.mul(psi)?)
}

/// `Aⱼ⁺ψ = (−∂ₓ + f)ψ`.
pub fn darboux_adjoint(psi: &GridFunction, f: &GridFunction) -> Result<GridFunction> {
    let d = derivative(psi.values(), psi.grid().spacing());
    let dpsi = GridFunction::new(*psi.grid(), d)?;
    f.mul(psi)?.sub(&dpsi)
}

fn gap_root(lambda: f64, lambda_j: f64) -> Result<f64> {
    if !(lambda > lambda_j) {
        return Err(Error::invalid(format!(
            "normalized map needs λ > λⱼ, got λ = {lambda}, λⱼ = {lambda_j}"
        )));
    }
    Ok((lambda - lambda_j).sqrt())
}

/// `Aⱼψ/√(λ−λⱼ)`, the level-raising step of the normalized evolution.
pub fn darboux_map_normalized(
    psi: &GridFunction,
    f: &GridFunction,
    lambda: f64,
    lambda_j: f64,
) -> Result<GridFunction> {
    let s = gap_root(lambda, lambda_j)?;
    Ok(darboux_map(psi, f)?.scale(Complex64::new(1.0 / s, 0.0)))
}

/// `Aⱼ⁺ψ/√(λ−λⱼ)`, inverse of [`darboux_map_normalized`] on the eigenspace of `λ`.
pub fn darboux_adjoint_normalized(
    psi: &GridFunction,
    f: &GridFunction,
    lambda: f64,
    lambda_j: f64,
) -> Result<GridFunction> {
    let s = gap_root(lambda, lambda_j)?;
    Ok(darboux_adjoint(psi, f)?.scale(Complex64::new(1.0 / s, 0.0)))
}

/// Nodes at each end excluded from [`ttr_check`]: two nested stencils.
pub const TTR_MARGIN: usize = 2 * BOUNDARY_LAYERS;

/// Three-term recurrence residual
/// `√(λ−λⱼ)ψ⁽ʲ⁺¹⁾ − (fⱼ+fⱼ₋₁)ψ⁽ʲ⁾ + √(λ−λⱼ₋₁)ψ⁽ʲ⁻¹⁾`,
/// in max norm relative to `max|ψ⁽ʲ⁾|`.
pub fn ttr_check(
    psis: [&GridFunction; 3],
    f_j: &GridFunction,
    f_jm1: &GridFunction,
    lambda: f64,
    lambda_j: f64,
    lambda_jm1: f64,
) -> Result<f64> {
    let [prev, cur, next] = psis;
    let sj = gap_root(lambda, lambda_j)?;
    let sjm1 = gap_root(lambda, lambda_jm1)?;
    let fsum = f_j.add(f_jm1)?;
    let r = next
        .scale(Complex64::new(sj, 0.0))
        .sub(&fsum.mul(cur)?)?
        .add(&prev.scale(Complex64::new(sjm1, 0.0)))?;
    let abs: Vec<f64> = r.values().iter().map(|v| v.norm()).collect();
    let scale = interior_max(
        &cur.values().iter().map(|v| v.norm()).collect::<Vec<_>>(),
        TTR_MARGIN,
    );
    if scale == 0.0 {
        return Err(Error::invalid("middle wavefunction vanishes"));
    }
    Ok(interior_max(&abs, TTR_MARGIN) / scale)
}

/// `(−∂² + uⱼ₊₁)(Aⱼψ) − Aⱼ((−∂² + uⱼ)ψ)` in max norm over interior nodes.
pub fn intertwining_residual(
    u_j: &GridFunction,
    u_j1: &GridFunction,
    f_j: &GridFunction,
    psi: &GridFunction,
) -> Result<f64> {
    let h = psi.grid().spacing();
    let apply_l = |u: &GridFunction, v: &GridFunction| -> Result<GridFunction> {
        let d2 = GridFunction::new(*v.grid(), second_derivative(v.values(), h))?;
        u.mul(v)?.sub(&d2)
    };
    let left = apply_l(u_j1, &darboux_map(psi, f_j)?)?;
    let right = darboux_map(&apply_l(u_j, psi)?, f_j)?;
    left.max_abs_diff(&right, TTR_MARGIN)
}
