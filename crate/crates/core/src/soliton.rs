//! KdV n-soliton tau functions in Wronskian, determinant and Hirota form.
//!
//! With `θⱼ = kⱼx − kⱼ³t + θⱼ⁽⁰⁾` the potential `u = −2∂ₓ² log τ` is
//! reflectionless with bound states at `−kⱼ²/4`.

use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;
use twofloat::TwoFloat;

use crate::darboux::TauFunction;
use crate::error::{Error, Result};
use crate::numerics::diff::BOUNDARY_LAYERS;
use crate::numerics::expsum::ExpSum;
use crate::numerics::grid::{interior_max, Grid, GridFunction};
use crate::numerics::logsum::LogSum;

/// Largest mode count accepted by the `2ⁿ`-term sums.
pub const MAX_ENUMERATED_MODES: usize = 24;

/// Step of the finite-difference second derivative of `log τ`.
pub const LOG_TAU_STEP: f64 = 0.02;

/// Default time step of the KdV residual.
pub const DEFAULT_DT: f64 = 1e-4;

/// One soliton: wavenumber, phase, and its position in the caller's list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: f64,
    pub theta0: f64,
    pub source_index: usize,
}

/// Soliton modes stored in strictly ascending `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonParams {
    modes: Vec<Mode>,
}

impl SolitonParams {
    /// Sorts the modes by `k`; `source_index` keeps the caller's order.
    pub fn new(k: &[f64], theta0: &[f64]) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::invalid("at least one soliton mode is required"));
        }
        if k.len() != theta0.len() {
            return Err(Error::invalid(format!(
                "{} wavenumbers but {} phases",
                k.len(),
                theta0.len()
            )));
        }
        if let Some(bad) = k.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::invalid(format!("wavenumbers must be positive, got {bad}")));
        }
        if let Some(bad) = theta0.iter().find(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("phases must be finite, got {bad}")));
        }
        let mut modes: Vec<Mode> = k
            .iter()
            .zip(theta0)
            .enumerate()
            .map(|(i, (&k, &theta0))| Mode {
                k,
                theta0,
                source_index: i,
            })
            .collect();
        modes.sort_by(|a, b| a.k.total_cmp(&b.k));
        for w in modes.windows(2) {
            if w[1].k <= w[0].k {
                return Err(Error::invalid(format!(
                    "wavenumbers must be distinct, {} repeats",
                    w[0].k
                )));
            }
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn k(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.k).collect()
    }

    pub fn theta0(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.theta0).collect()
    }

    /// Phases `θⱼ(x, t)` in storage order.
    pub fn theta(&self, x: f64, t: f64) -> Vec<f64> {
        self.modes
            .iter()
            .map(|m| m.k * x - m.k.powi(3) * t + m.theta0)
            .collect()
    }

    /// Bound-state energies `−kⱼ²/4`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.modes.iter().rev().map(|m| -0.25 * m.k * m.k).collect()
    }

    /// `Aᵢⱼ = ln((kᵢ−kⱼ)²/(kᵢ+kⱼ)²)` for `i ≠ j`.
    pub fn phase_shift(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.modes[i].k, self.modes[j].k);
        2.0 * ((a - b).abs() / (a + b)).ln()
    }

    /// Same modes with every phase shifted by `kⱼ·delta`; translates `u` by `−delta`.
    pub fn translated(&self, delta: f64) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|m| Mode {
                theta0: m.theta0 + m.k * delta,
                ..*m
            })
            .collect();
        Self { modes }
    }
}

/// Seeds `cosh(θ̃ⱼ/2)` for even `j`, `sinh(θ̃ⱼ/2)` for odd `j`, in ascending `k`.
///
/// The seed phases are `θ̃ⱼ = θⱼ + ½Σᵢ≠ⱼ Aⱼᵢ`: with this shift the Wronskian
/// equals the determinant and Hirota forms at phases `θⱼ` up to a factor `e^{ax+b}`.
fn seeds(p: &SolitonParams, t: f64, x_rates: &[f64]) -> Vec<ExpSum> {
    p.modes
        .iter()
        .zip(x_rates)
        .enumerate()
        .map(|(j, (m, &kx))| {
            let pair: f64 = (0..p.len()).filter(|&i| i != j).map(|i| p.phase_shift(j, i)).sum();
            let shift = 0.5 * (m.theta0 + 0.5 * pair - m.k.powi(3) * t);
            if j % 2 == 0 {
                ExpSum::cosh(0.5 * kx, shift)
            } else {
                ExpSum::sinh(0.5 * kx, shift)
            }
        })
        .collect()
}

fn normalized_wronskian(seeds: &[ExpSum]) -> Result<ExpSum> {
    let w = ExpSum::wronskian(seeds)?;
    if w.is_zero() {
        return Err(Error::DegenerateSeeds);
    }
    if w.eval_scaled(0.0).0.re < 0.0 {
        Ok(-&w)
    } else {
        Ok(w)
    }
}

/// `W(φ₀,…,φₙ₋₁)` as an exact exponential sum in `x`, positive at `x = 0`.
pub fn tau_wronskian(p: &SolitonParams, t: f64) -> Result<ExpSum> {
    normalized_wronskian(&seeds(p, t, &p.k()))
}

/// Determinant matrix after the symmetric rescaling `S⁻¹CS⁻¹`, `Sᵢᵢ = e^{max(θᵢ,0)/2}`,
/// together with its two `x`-derivatives and `ln det S²`.
fn scaled_determinant_matrix(
    p: &SolitonParams,
    x: f64,
    t: f64,
) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, f64) {
    let n = p.len();
    let theta = p.theta(x, t);
    let k = p.k();
    let s: Vec<f64> = theta.iter().map(|&th| 0.5 * th.max(0.0)).collect();
    let off = DMatrix::from_fn(n, n, |i, j| {
        2.0 * (k[i] * k[j]).sqrt() / (k[i] + k[j]) * (0.5 * (theta[i] + theta[j]) - s[i] - s[j]).exp()
    });
    let rate = DMatrix::from_fn(n, n, |i, j| 0.5 * (k[i] + k[j]));
    let d1 = off.component_mul(&rate);
    let d2 = d1.component_mul(&rate);
    let mut c = off;
    for i in 0..n {
        c[(i, i)] += (-2.0 * s[i]).exp();
    }
    (c, d1, d2, 2.0 * s.iter().sum::<f64>())
}

/// Double-double quotient through the `TwoFloat / f64` path; the crate's
/// `TwoFloat / TwoFloat` drops the low word of the reciprocal residual.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a / b.hi();
    q - q * (b.lo() / b.hi())
}

/// `ln det C` with `Cᵢⱼ = δᵢⱼ + 2√(kᵢkⱼ)/(kᵢ+kⱼ)·e^{(θᵢ+θⱼ)/2}`, by LU with partial pivoting.
///
/// Rows and columns with positive phase are rescaled by `e^{−θᵢ/2}` first so
/// the entries stay bounded. The Cauchy kernel `2kⱼ/(kᵢ+kⱼ)` (similar to the
/// symmetric one) and the elimination are carried in double-double precision.
pub fn log_tau_determinant(p: &SolitonParams, x: f64, t: f64) -> Result<f64> {
    let n = p.len();
    let theta = p.theta(x, t);
    let k = p.k();
    let s: Vec<f64> = theta.iter().map(|&th| 0.5 * th.max(0.0)).collect();
    let r: Vec<f64> = theta.iter().zip(&s).map(|(&th, &si)| (0.5 * th - si).exp()).collect();
    let mut m: Vec<TwoFloat> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let kernel = dd_div(TwoFloat::from(2.0 * k[j]), TwoFloat::new_add(k[i], k[j]));
            let mut v = kernel * r[i] * r[j];
            if i == j {
                v += (-2.0 * s[i]).exp();
            }
            v
        })
        .collect();
    let not_positive = || {
        Error::Numeric(format!("soliton determinant is not positive at x = {x}, t = {t}"))
    };
    let mut log_det = 2.0 * s.iter().sum::<f64>();
    let mut negative = false;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| m[a * n + col].hi().abs().total_cmp(&m[b * n + col].hi().abs()))
            .unwrap_or(col);
        if piv != col {
            for j in 0..n {
                m.swap(col * n + j, piv * n + j);
            }
            negative = !negative;
        }
        let d = m[col * n + col];
        if d.hi() == 0.0 || !d.hi().is_finite() {
            return Err(not_positive());
        }
        if d.hi() < 0.0 {
            negative = !negative;
        }
        log_det += d.hi().abs().ln() + (d.lo() / d.hi()).ln_1p();
        for i in col + 1..n {
            let f = dd_div(m[i * n + col], d);
            for j in col + 1..n {
                let sub = f * m[col * n + j];
                m[i * n + j] -= sub;
            }
        }
    }
    if negative {
        return Err(not_positive());
    }
    Ok(log_det)
}

/// `∂ₓ² ln det C` from Jacobi's formula `tr(C⁻¹C'') − tr((C⁻¹C')²)` on the same LU.
pub fn log_tau_determinant_d2(p: &SolitonParams, x: f64, t: f64) -> Result<f64> {
    let (c, d1, d2, _) = scaled_determinant_matrix(p, x, t);
    let lu = c.lu();
    if !(lu.determinant() > 0.0) {
        return Err(Error::Numeric(format!(
            "soliton determinant is not positive at x = {x}, t = {t}"
        )));
    }
    let solve = |m: &DMatrix<f64>| {
        lu.solve(m)
            .ok_or_else(|| Error::Numeric(format!("singular soliton matrix at x = {x}")))
    };
    let x1 = solve(&d1)?;
    let x2 = solve(&d2)?;
    Ok(x2.trace() - (&x1 * &x1).trace())
}

pub fn tau_determinant(p: &SolitonParams, x: f64, t: f64) -> Result<f64> {
    log_tau_determinant(p, x, t).map(f64::exp)
}

/// Low bits enumerated sequentially inside each parallel block.
const BLOCK_BITS: usize = 14;

fn check_enumerable(n: usize) -> Result<()> {
    if n > MAX_ENUMERATED_MODES {
        return Err(Error::invalid(format!(
            "exhaustive sums support at most {MAX_ENUMERATED_MODES} modes, got {n}"
        )));
    }
    Ok(())
}

/// `ln Σ_σ exp(Σᵢ<ⱼ Aᵢⱼσᵢσⱼ + Σθᵢσᵢ)` over `σ ∈ {0,1}ⁿ`.
pub fn log_tau_hirota(p: &SolitonParams, x: f64, t: f64) -> Result<f64> {
    let n = p.len();
    check_enumerable(n)?;
    let theta = p.theta(x, t);
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { p.phase_shift(i, j) }).collect())
        .collect();
    let low = n.min(BLOCK_BITS);
    let high = n - low;
    let block = |hb: u64| -> LogSum {
        let mut sigma = vec![false; n];
        for (b, s) in sigma.iter_mut().enumerate().skip(low) {
            *s = (hb >> (b - low)) & 1 == 1;
        }
        let mut field: Vec<f64> = (0..n)
            .map(|i| theta[i] + (0..n).filter(|&j| sigma[j]).map(|j| a[i][j]).sum::<f64>())
            .collect();
        let mut e = 0.0;
        for i in 0..n {
            if sigma[i] {
                e += theta[i];
                for j in 0..i {
                    if sigma[j] {
                        e += a[i][j];
                    }
                }
            }
        }
        let mut acc = LogSum::new();
        acc.add(e);
        for g in 1u64..(1u64 << low) {
            let b = g.trailing_zeros() as usize;
            let d = if sigma[b] {
                e -= field[b];
                -1.0
            } else {
                e += field[b];
                1.0
            };
            sigma[b] = !sigma[b];
            for (j, fj) in field.iter_mut().enumerate() {
                if j != b {
                    *fj += d * a[j][b];
                }
            }
            acc.add(e);
        }
        acc
    };
    let parts: Vec<LogSum> = if high == 0 {
        vec![block(0)]
    } else {
        (0..1u64 << high).into_par_iter().map(block).collect()
    };
    let mut total = LogSum::new();
    parts.iter().for_each(|b| total.merge(b));
    Ok(total.ln())
}

pub fn tau_hirota(p: &SolitonParams, x: f64, t: f64) -> Result<f64> {
    log_tau_hirota(p, x, t).map(f64::exp)
}

/// Which tau representation a potential is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TauForm {
    Wronskian,
    Determinant,
    Hirota,
}

impl FromStr for TauForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wronskian" => Ok(Self::Wronskian),
            "determinant" => Ok(Self::Determinant),
            "hirota" => Ok(Self::Hirota),
            other => Err(Error::invalid(format!("unknown tau form {other:?}"))),
        }
    }
}

/// Eighth-order central stencil for the second derivative, offsets `0..=4`.
const D2_STENCIL: [f64; 5] = [-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0];

fn second_log_derivative(log_tau: &impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let mut acc = D2_STENCIL[0] * log_tau(x)?;
    for (m, w) in D2_STENCIL.iter().enumerate().skip(1) {
        let d = m as f64 * h;
        acc += w * (log_tau(x + d)? + log_tau(x - d)?);
    }
    Ok(acc / (h * h))
}

/// `u = −2∂ₓ² log τ` on the grid.
///
/// The Wronskian form uses exact log-derivatives, the determinant form
/// Jacobi's formula, and the Hirota form an eighth-order central difference
/// of `log τ` with step [`LOG_TAU_STEP`].
pub fn soliton_potential(p: &SolitonParams, t: f64, grid: Grid, form: TauForm) -> Result<GridFunction> {
    let values: Vec<f64> = match form {
        TauForm::Wronskian => {
            let tau = TauFunction::new(tau_wronskian(p, t)?);
            tau.check_nonvanishing(&grid)?;
            grid.points().map(|x| -2.0 * tau.log_derivatives(x, 2)[1].re).collect()
        }
        TauForm::Determinant => {
            let xs: Vec<f64> = grid.points().collect();
            xs.par_iter()
                .map(|&x| log_tau_determinant_d2(p, x, t).map(|d| -2.0 * d))
                .collect::<Result<_>>()?
        }
        TauForm::Hirota => {
            let xs: Vec<f64> = grid.points().collect();
            let lt = |y: f64| log_tau_hirota(p, y, t);
            xs.par_iter()
                .map(|&x| second_log_derivative(&lt, x, LOG_TAU_STEP).map(|d| -2.0 * d))
                .collect::<Result<_>>()?
        }
    };
    GridFunction::from_real(grid, values)
}

/// `max |uₜ − 6uuₓ + uₓₓₓ|` on interior nodes.
///
/// Space derivatives are exact log-derivatives of the Wronskian; `uₜ` is the
/// fourth-order central difference with step `dt`.
pub fn kdv_residual(p: &SolitonParams, grid: Grid, t: f64, dt: f64) -> Result<f64> {
    kdv_residual_with_rates(p, &p.k(), grid, t, dt)
}

/// KdV residual when mode `index` uses wavenumber `kᵢ + delta` in `x` but
/// the unperturbed `kᵢ³` in the time evolution.
pub fn kdv_residual_detuned(
    p: &SolitonParams,
    index: usize,
    delta: f64,
    grid: Grid,
    t: f64,
    dt: f64,
) -> Result<f64> {
    if index >= p.len() {
        return Err(Error::invalid(format!("mode index {index} out of range")));
    }
    let mut rates = p.k();
    rates[index] += delta;
    kdv_residual_with_rates(p, &rates, grid, t, dt)
}

fn kdv_residual_with_rates(p: &SolitonParams, rates: &[f64], grid: Grid, t: f64, dt: f64) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(Error::invalid(format!("time step must be positive, got {dt}")));
    }
    let tau_at = |s: f64| -> Result<TauFunction> {
        let tau = TauFunction::new(normalized_wronskian(&seeds(p, s, rates))?);
        tau.check_nonvanishing(&grid)?;
        Ok(tau)
    };
    let now = tau_at(t)?;
    let shifted: Vec<TauFunction> = [-2.0, -1.0, 1.0, 2.0]
        .iter()
        .map(|m| tau_at(t + m * dt))
        .collect::<Result<_>>()?;
    let weights = [1.0, -8.0, 8.0, -1.0];
    let r: Vec<f64> = grid
        .points()
        .map(|x| {
            let kappa = now.log_derivatives(x, 5);
            let u = -2.0 * kappa[1].re;
            let ux = -2.0 * kappa[2].re;
            let uxxx = -2.0 * kappa[4].re;
            let ut: f64 = shifted
                .iter()
                .zip(weights)
                .map(|(tau, w)| w * -2.0 * tau.log_derivatives(x, 2)[1].re)
                .sum::<f64>()
                / (12.0 * dt);
            (ut - 6.0 * u * ux + uxxx).abs()
        })
        .collect();
    Ok(interior_max(&r, BOUNDARY_LAYERS))
}

/// Self-similar wavenumbers `kⱼ = k₀qʲ`, `j = 0..n`, all with phase `theta0`.
pub fn selfsim_soliton_params(k0: f64, q: f64, theta0: f64, n: usize) -> Result<SolitonParams> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("q must lie in (0, 1), got {q}")));
    }
    if !(k0 > 0.0) {
        return Err(Error::invalid(format!("k0 must be positive, got {k0}")));
    }
    let k: Vec<f64> = (0..n).map(|j| k0 * q.powi(j as i32)).collect();
    SolitonParams::new(&k, &vec![theta0; n])
}
