//! Jacobi theta functions in the nome convention
//! `θ₁(ν,p) = 2Σ_{m≥0} (−1)ᵐ p^{(m+½)²} sin((2m+1)ν)`,
//! `θ₄(ν,p) = 1 + 2Σ_{m≥1} (−1)ᵐ p^{m²} cos(2mν)`.

use crate::error::{Error, Result};

/// Series terms below this magnitude end the summation.
pub const THETA_TRUNCATION: f64 = 1e-16;

/// The nome `p` of the theta series, `0 ≤ p < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaNome(f64);

impl ThetaNome {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::invalid(format!("theta nome must lie in [0, 1), got {p}")));
        }
        Ok(Self(p))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

pub fn theta1(nu: f64, nome: ThetaNome) -> f64 {
    let p = nome.0;
    if p == 0.0 {
        return 0.0;
    }
    let lp = p.ln();
    let mut sum = 0.0;
    for m in 0.. {
        let e = (m as f64 + 0.5).powi(2);
        let mag = 2.0 * (e * lp).exp();
        if mag < THETA_TRUNCATION {
            break;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * mag * ((2 * m + 1) as f64 * nu).sin();
    }
    sum
}

pub fn theta4(nu: f64, nome: ThetaNome) -> f64 {
    let p = nome.0;
    if p == 0.0 {
        return 1.0;
    }
    let lp = p.ln();
    let mut sum = 1.0;
    for m in 1.. {
        let mag = 2.0 * ((m * m) as f64 * lp).exp();
        if mag < THETA_TRUNCATION {
            break;
        }
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * mag * (2.0 * m as f64 * nu).cos();
    }
    sum
}
