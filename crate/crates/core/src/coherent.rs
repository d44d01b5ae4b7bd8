//! Generalized coherent states `a|α⟩_U = αU|α⟩_U` for the identity, parity,
//! Fourier and fractional-Fourier symmetries.
//!
//! Coordinate closed forms carry the `π^{−1/4}` factor that makes them unit
//! normalized in `L²(ℝ)`.

use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::diff::{derivative, BOUNDARY_LAYERS};
use crate::numerics::grid::{interior_max, Grid, GridFunction};
use crate::oscillator::{evolution_op, fock_to_grid, FockVector, HERMITE_MAX_INDEX};

/// Largest admissible dropped tail `Σ_{n≥M} |α|²ⁿ/n!`.
pub const TRUNCATION_TAIL: f64 = 1e-16;

/// Largest admissible boundary-to-peak ratio for integral transforms.
pub const TRANSFORM_DECAY_LIMIT: f64 = 1e-12;

/// Phase-space symmetry `U` defining the lowering operator `U⁻¹a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Canonical,
    Parity,
    FourierPlus,
    FourierMinus,
    TitulaerGlauber,
}

impl Flavor {
    pub const ALL: [Flavor; 5] = [
        Flavor::Canonical,
        Flavor::Parity,
        Flavor::FourierPlus,
        Flavor::FourierMinus,
        Flavor::TitulaerGlauber,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Flavor::Canonical => "canonical",
            Flavor::Parity => "parity",
            Flavor::FourierPlus => "fourier_plus",
            Flavor::FourierMinus => "fourier_minus",
            Flavor::TitulaerGlauber => "titulaer_glauber",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Flavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Flavor::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown coherent-state flavor '{s}'")))
    }
}

/// Amplitude, flavor, rotation angle and Fock truncation of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentSpec {
    alpha: Complex64,
    flavor: Flavor,
    phi: f64,
    truncation: usize,
}

/// `max(40, ⌈8|α|² + 20⌉)`.
pub fn default_truncation(alpha: Complex64) -> usize {
    let m = (8.0 * alpha.norm_sqr() + 20.0).ceil();
    if m.is_finite() {
        (m as usize).max(40)
    } else {
        usize::MAX
    }
}

/// `Σ_{n≥m} aⁿ/n!` for `a = |α|²`.
pub fn truncation_tail(alpha_sq: f64, m: usize) -> f64 {
    if alpha_sq == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let ln_a = alpha_sq.ln();
    let ln_fact: f64 = (2..=m).map(|k| (k as f64).ln()).sum();
    let mut term = (m as f64 * ln_a - ln_fact).exp();
    let mut sum = 0.0;
    let mut n = m;
    while term > 0.0 {
        sum += term;
        n += 1;
        term *= alpha_sq / n as f64;
        if n as f64 > alpha_sq && term < 1e-20 * sum {
            break;
        }
    }
    sum
}

impl CoherentSpec {
    /// Spec with `φ = 0` and the default truncation.
    pub fn new(alpha: Complex64, flavor: Flavor) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::invalid(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self {
            alpha,
            flavor,
            phi: 0.0,
            truncation: default_truncation(alpha),
        })
    }

    pub fn titulaer_glauber(alpha: Complex64, phi: f64) -> Result<Self> {
        Self::new(alpha, Flavor::TitulaerGlauber)?.with_phi(phi)
    }

    pub fn with_phi(mut self, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::invalid(format!("phi must be finite, got {phi}")));
        }
        self.phi = phi;
        Ok(self)
    }

    pub fn with_truncation(mut self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("truncation must be positive"));
        }
        self.truncation = m;
        Ok(self)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }
}

fn canonical_coeffs(alpha: Complex64, m: usize) -> Vec<Complex64> {
    let a = alpha.norm();
    let arg = alpha.arg();
    let mut ln_fact = 0.0;
    (0..m)
        .map(|n| {
            if n > 0 {
                ln_fact += (n as f64).ln();
            }
            if a == 0.0 {
                return Complex64::new(if n == 0 { 1.0 } else { 0.0 }, 0.0);
            }
            let ln_mag = -0.5 * a * a + n as f64 * a.ln() - 0.5 * ln_fact;
            Complex64::from_polar(ln_mag.exp(), n as f64 * arg)
        })
        .collect()
}

/// `e^{iπk/4}` with `k` reduced exactly.
fn eighth_root_pow(k: i64) -> Complex64 {
    Complex64::from_polar(1.0, FRAC_PI_4 * k.rem_euclid(8) as f64)
}

/// Fock coefficients `e^{−|α|²/2}αⁿ/√n!` times the flavor phase.
pub fn coherent_fock(spec: &CoherentSpec) -> Result<FockVector> {
    let m = spec.truncation;
    let tail = truncation_tail(spec.alpha.norm_sqr(), m);
    if !(tail < TRUNCATION_TAIL) {
        return Err(Error::Truncation { m, tail });
    }
    let alpha = spec.alpha;
    let coeffs = match spec.flavor {
        Flavor::Canonical => canonical_coeffs(alpha, m),
        Flavor::Parity => {
            let i = Complex64::i();
            let plus = canonical_coeffs(i * alpha, m);
            let minus = canonical_coeffs(-i * alpha, m);
            let w = eighth_root_pow(1);
            plus.iter()
                .zip(&minus)
                .map(|(p, q)| (w.conj() * p + w * q) / SQRT_2)
                .collect()
        }
        Flavor::FourierPlus | Flavor::FourierMinus => {
            let sign = if spec.flavor == Flavor::FourierPlus { 1 } else { -1 };
            canonical_coeffs(alpha, m)
                .into_iter()
                .enumerate()
                .map(|(n, c)| {
                    let n = n as i64;
                    c * eighth_root_pow(sign * n * (n - 1))
                })
                .collect()
        }
        Flavor::TitulaerGlauber => {
            let phi = spec.phi.rem_euclid(2.0 * PI);
            canonical_coeffs(alpha, m)
                .into_iter()
                .enumerate()
                .map(|(n, c)| {
                    let k = (n as u64 * n.saturating_sub(1) as u64 / 2) as f64;
                    c * Complex64::from_polar(1.0, -(phi * k).rem_euclid(2.0 * PI))
                })
                .collect()
        }
    };
    FockVector::new(coeffs)
}

fn sum_exp(terms: &[(Complex64, Complex64)]) -> Complex64 {
    terms.iter().map(|(c, e)| c * e.exp()).sum()
}

/// Closed-form coordinate wave function at one point.
fn coordinate_value(flavor: Flavor, alpha: Complex64, x: f64) -> Complex64 {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let norm = PI.powf(-0.25);
    let a2 = alpha * alpha;
    let abs2 = alpha.norm_sqr();
    let gauss = -0.5 * (abs2 + x * x);
    let value = match flavor {
        Flavor::Canonical => {
            sum_exp(&[(one, gauss - 0.5 * a2 + SQRT_2 * alpha * x)])
        }
        Flavor::Parity => {
            let pre = 0.5 * (a2 - abs2 - x * x);
            let z = SQRT_2 * alpha * x - FRAC_PI_4;
            SQRT_2 * 0.5 * sum_exp(&[(one, pre + i * z), (one, pre - i * z)])
        }
        Flavor::FourierPlus | Flavor::FourierMinus => {
            // (FC1exp) for s = +1; (FC2exp) for s = −1.
            let s = if flavor == Flavor::FourierPlus { 1.0 } else { -1.0 };
            let w_cosh = (one + s * i) * alpha * x;
            let w_sinh = (one - s * i) * alpha * x;
            let p_cosh = -s * 0.5 * i * a2;
            let p_sinh = s * (0.5 * i * a2 + i * FRAC_PI_4);
            0.5 * sum_exp(&[
                (one, gauss + p_cosh + w_cosh),
                (one, gauss + p_cosh - w_cosh),
                (one, gauss + p_sinh + w_sinh),
                (-one, gauss + p_sinh - w_sinh),
            ])
        }
        Flavor::TitulaerGlauber => unreachable!("no closed coordinate form"),
    };
    norm * value
}

/// Closed-form coordinate wave function on a grid.
pub fn coherent_coordinate(spec: &CoherentSpec, grid: Grid) -> Result<GridFunction> {
    if spec.flavor == Flavor::TitulaerGlauber {
        return Err(Error::invalid(
            "titulaer_glauber has no closed coordinate form; use fock_to_grid(coherent_fock(..))",
        ));
    }
    let (flavor, alpha) = (spec.flavor, spec.alpha);
    Ok(GridFunction::from_fn(grid, |x| coordinate_value(flavor, alpha, x)))
}

/// Maps `φ` to `(−π, π]`.
fn principal_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn check_angle(phi: f64) -> Result<f64> {
    if !phi.is_finite() {
        return Err(Error::invalid(format!("phi must be finite, got {phi}")));
    }
    let p = principal_angle(phi);
    if p == 0.0 || p == PI || p.sin() == 0.0 {
        return Err(Error::invalid(format!(
            "Mehler kernel degenerates at sin φ = 0 (φ = {phi})"
        )));
    }
    Ok(p)
}

/// `(2πi sinφ)^{−1/2} exp[i((x²+y²)cosφ − 2xy)/(2sinφ)]`, principal branch for
/// `φ ∈ (0, π)` and `K(x,y;−φ) = conj K(x,y;φ)`.
pub fn mehler_kernel(x: f64, y: f64, phi: f64) -> Result<Complex64> {
    let p = check_angle(phi)?;
    let a = p.abs();
    let (s, c) = a.sin_cos();
    let pre = (Complex64::new(0.0, 2.0 * PI * s)).sqrt().inv();
    let k = pre * Complex64::new(0.0, ((x * x + y * y) * c - 2.0 * x * y) / (2.0 * s)).exp();
    Ok(if p < 0.0 { k.conj() } else { k })
}

fn check_decay(psi: &GridFunction) -> Result<()> {
    let ratio = psi.boundary_ratio();
    if ratio > TRANSFORM_DECAY_LIMIT {
        return Err(Error::DecayViolation {
            ratio,
            limit: TRANSFORM_DECAY_LIMIT,
        });
    }
    Ok(())
}

/// Nodes between exact re-evaluations of the cross phase.
const RESEED: usize = 64;

/// `pre·e^{iax²} ∫ e^{iby² + icxy} ψ(y) dy` by the trapezoid rule, evaluated on
/// the grid of `psi`.
fn chirp_transform(psi: &GridFunction, pre: Complex64, a: f64, b: f64, c: f64) -> GridFunction {
    let grid = *psi.grid();
    let h = grid.spacing();
    let n = grid.len();
    let ys: Vec<f64> = grid.points().collect();
    let weighted: Vec<Complex64> = psi
        .values()
        .iter()
        .zip(&ys)
        .enumerate()
        .map(|(j, (v, &y))| {
            let w = if j == 0 || j + 1 == n { 0.5 * h } else { h };
            v * w * Complex64::new(0.0, b * y * y).exp()
        })
        .collect();
    let values = ys
        .par_iter()
        .map(|&x| {
            let step = Complex64::new(0.0, c * x * h).exp();
            let mut acc = Complex64::new(0.0, 0.0);
            let mut phase = Complex64::new(1.0, 0.0);
            for (j, w) in weighted.iter().enumerate() {
                if j % RESEED == 0 {
                    phase = Complex64::new(0.0, c * x * ys[j]).exp();
                }
                acc += w * phase;
                phase *= step;
            }
            pre * Complex64::new(0.0, a * x * x).exp() * acc
        })
        .collect();
    GridFunction::new(grid, values).expect("grid length preserved")
}

/// `e^{−iφL}ψ` by quadrature against the Mehler kernel, on the grid of `psi`.
pub fn frft_apply(psi: &GridFunction, phi: f64) -> Result<GridFunction> {
    let p = check_angle(phi)?;
    check_decay(psi)?;
    let (s, c) = p.abs().sin_cos();
    let chirp = c / (2.0 * s);
    let pre = Complex64::new(0.0, 2.0 * PI * s).sqrt().inv();
    if p > 0.0 {
        Ok(chirp_transform(psi, pre, chirp, chirp, -1.0 / s))
    } else {
        Ok(chirp_transform(psi, pre.conj(), -chirp, -chirp, 1.0 / s))
    }
}

/// Unitary `(2π)^{−1/2} ∫ e^{±ixy} ψ(y) dy` on the grid of `psi`.
pub fn fourier_apply(psi: &GridFunction, sign: i32) -> Result<GridFunction> {
    if sign != 1 && sign != -1 {
        return Err(Error::invalid(format!("Fourier sign must be ±1, got {sign}")));
    }
    check_decay(psi)?;
    let pre = Complex64::new((2.0 * PI).sqrt().recip(), 0.0);
    Ok(chirp_transform(psi, pre, 0.0, 0.0, sign as f64))
}

/// Max-norm of `(d/dx + x)ψ − √2α·Uψ` on interior nodes.
///
/// For `titulaer_glauber` the right side is `√2α e^{iφ/2} e^{−iφL}ψ`, the form
/// satisfied by the series with phases `e^{−iφn(n−1)/2}`.
pub fn eigen_residual(spec: &CoherentSpec, grid: Grid) -> Result<f64> {
    let alpha = spec.alpha;
    let (psi, u_psi) = match spec.flavor {
        Flavor::Canonical => {
            let psi = coherent_coordinate(spec, grid)?;
            (psi.clone(), psi)
        }
        Flavor::Parity => {
            let psi = coherent_coordinate(spec, grid)?;
            let mirrored = GridFunction::from_fn(grid, |x| coordinate_value(Flavor::Parity, alpha, -x));
            (psi, mirrored)
        }
        Flavor::FourierPlus | Flavor::FourierMinus => {
            let psi = coherent_coordinate(spec, grid)?;
            let sign = if spec.flavor == Flavor::FourierPlus { 1 } else { -1 };
            let u = fourier_apply(&psi, sign)?;
            (psi, u)
        }
        Flavor::TitulaerGlauber => {
            if spec.truncation > HERMITE_MAX_INDEX + 1 {
                return Err(Error::invalid(format!(
                    "titulaer_glauber coordinate synthesis needs M ≤ {}, got {}",
                    HERMITE_MAX_INDEX + 1,
                    spec.truncation
                )));
            }
            let v = coherent_fock(spec)?;
            let psi = fock_to_grid(&v, grid)?;
            let p = principal_angle(spec.phi);
            let u = if p == 0.0 || p == PI {
                fock_to_grid(&evolution_op(v.truncation(), p)?.apply(&v), grid)?
            } else {
                frft_apply(&psi, p)?
            };
            (psi, u.scale(Complex64::from_polar(1.0, 0.5 * p)))
        }
    };
    check_decay(&psi)?;
    let d = derivative(psi.values(), grid.spacing());
    let rhs = SQRT_2 * alpha;
    let residual: Vec<f64> = grid
        .points()
        .zip(d.iter().zip(psi.values().iter().zip(u_psi.values())))
        .map(|(x, (dv, (v, u)))| (dv + x * v - rhs * u).norm())
        .collect();
    Ok(interior_max(&residual, BOUNDARY_LAYERS))
}
