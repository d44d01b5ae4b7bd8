//! Nonlocal Ising chain behind the Hirota form of the soliton tau function.
//!
//! With `sᵢ = 2σᵢ − 1` the Hirota sum becomes `τ = e^φ Z`,
//! `Z = Σ_s exp(−Σᵢ<ⱼ βJᵢⱼsᵢsⱼ + Σ βHᵢsᵢ)`.

use std::f64::consts::PI;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::logsum::LogSum;
use crate::numerics::quadrature::adaptive_simpson;
use crate::numerics::theta::{theta1, theta4, ThetaNome};
use crate::soliton::{SolitonParams, MAX_ENUMERATED_MODES};

/// Absolute tolerance of the magnetization integral.
pub const MAGNETIZATION_QUAD_TOL: f64 = 1e-10;

/// Dimensionless couplings `βJᵢⱼ` and fields `βHᵢ` of an `n`-site chain.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    beta_j: Vec<f64>,
    beta_h: Vec<f64>,
}

impl IsingModel {
    /// `beta_j` is the full symmetric matrix, row-major; its diagonal must vanish.
    pub fn new(beta_j: Vec<Vec<f64>>, beta_h: Vec<f64>) -> Result<Self> {
        let n = beta_h.len();
        if n == 0 {
            return Err(Error::invalid("Ising chain needs at least one site"));
        }
        if beta_j.len() != n || beta_j.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("coupling matrix must be {n}×{n}")));
        }
        for i in 0..n {
            if beta_j[i][i] != 0.0 {
                return Err(Error::invalid(format!("nonzero self-coupling at site {i}")));
            }
            for j in 0..n {
                if !beta_j[i][j].is_finite() || beta_j[i][j] != beta_j[j][i] {
                    return Err(Error::invalid(format!(
                        "couplings must be finite and symmetric, violated at ({i}, {j})"
                    )));
                }
            }
        }
        if let Some(h) = beta_h.iter().find(|h| !h.is_finite()) {
            return Err(Error::invalid(format!("field must be finite, got {h}")));
        }
        Ok(Self {
            beta_j: beta_j.concat(),
            beta_h,
        })
    }

    /// N=1 self-similar chain `kᵢ = qⁱ` with the homogeneous field `βH`.
    pub fn selfsim_homogeneous(q: f64, n: usize, beta_h: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::invalid(format!("q must lie in (0, 1), got {q}")));
        }
        let beta_j = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { 0.0 } else { -0.25 * selfsim_phase_shift(q, i.abs_diff(j)) })
                    .collect()
            })
            .collect();
        Self::new(beta_j, vec![beta_h; n])
    }

    pub fn len(&self) -> usize {
        self.beta_h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beta_h.is_empty()
    }

    pub fn beta_j(&self, i: usize, j: usize) -> f64 {
        self.beta_j[i * self.len() + j]
    }

    pub fn beta_h(&self) -> &[f64] {
        &self.beta_h
    }

    /// `−βE(s)` for spins given as booleans (`true` = +1).
    pub fn neg_beta_energy(&self, spins: &[bool]) -> f64 {
        let n = self.len();
        let s = |i: usize| if spins[i] { 1.0 } else { -1.0 };
        let mut e = 0.0;
        for i in 0..n {
            e += self.beta_h[i] * s(i);
            for j in 0..i {
                e -= self.beta_j(i, j) * s(i) * s(j);
            }
        }
        e
    }
}

/// `Aₘ = 2 ln((1−qᵐ)/(1+qᵐ))` for sites `m` apart in the chain `kᵢ = qⁱ`.
pub fn selfsim_phase_shift(q: f64, m: usize) -> f64 {
    let qm = q.powi(m as i32);
    2.0 * ((1.0 - qm) / (1.0 + qm)).ln()
}

/// The Ising chain and the offset `φ = ¼Σᵢ<ⱼAᵢⱼ + ½Σθⱼ` with `τ = e^φ Z`.
pub fn ising_from_solitons(p: &SolitonParams, x: f64, t: f64) -> Result<(IsingModel, f64)> {
    let n = p.len();
    let theta = p.theta(x, t);
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { p.phase_shift(i, j) }).collect())
        .collect();
    if a.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::invalid("coincident wavenumbers give infinite couplings"));
    }
    let beta_j = a.iter().map(|r| r.iter().map(|v| -0.25 * v).collect()).collect();
    let beta_h = (0..n)
        .map(|i| 0.5 * theta[i] + 0.25 * a[i].iter().sum::<f64>())
        .collect();
    let pair: f64 = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).map(|(i, j)| a[i][j]).sum();
    let phi = 0.25 * pair + 0.5 * theta.iter().sum::<f64>();
    Ok((IsingModel::new(beta_j, beta_h)?, phi))
}

const BLOCK_BITS: usize = 14;

/// Gray-code enumeration of all `2ⁿ` configurations.
///
/// Returns the accumulated `Z` and `Σ_s M(s)e^{−βE(s)}` with `M` the spin sum over `range`.
fn enumerate(model: &IsingModel, range: Range<usize>) -> Result<(LogSum, LogSum)> {
    let n = model.len();
    if n > MAX_ENUMERATED_MODES {
        return Err(Error::invalid(format!(
            "exhaustive enumeration supports at most {MAX_ENUMERATED_MODES} sites, got {n}"
        )));
    }
    let in_range = |i: usize| range.contains(&i);
    let low = n.min(BLOCK_BITS);
    let high = n - low;
    let block = |hb: u64| -> (LogSum, LogSum) {
        let mut spins = vec![false; n];
        for (b, s) in spins.iter_mut().enumerate().skip(low) {
            *s = (hb >> (b - low)) & 1 == 1;
        }
        let sv = |s: bool| if s { 1.0 } else { -1.0 };
        // local field hᵢ = βHᵢ − Σⱼ βJᵢⱼsⱼ, so flipping sᵢ changes −βE by −2sᵢhᵢ
        let mut field: Vec<f64> = (0..n)
            .map(|i| {
                model.beta_h[i]
                    - (0..n).map(|j| model.beta_j(i, j) * sv(spins[j])).sum::<f64>()
            })
            .collect();
        let mut e = model.neg_beta_energy(&spins);
        let mut mag: f64 = (0..n).filter(|&i| in_range(i)).map(|i| sv(spins[i])).sum();
        let mut z = LogSum::new();
        let mut m = LogSum::new();
        z.add(e);
        m.add_weighted(mag, e);
        for g in 1u64..(1u64 << low) {
            let b = g.trailing_zeros() as usize;
            let old = sv(spins[b]);
            e -= 2.0 * old * field[b];
            spins[b] = !spins[b];
            for (j, hj) in field.iter_mut().enumerate() {
                if j != b {
                    *hj += 2.0 * model.beta_j(j, b) * old;
                }
            }
            if in_range(b) {
                mag -= 2.0 * old;
            }
            z.add(e);
            m.add_weighted(mag, e);
        }
        (z, m)
    };
    let parts: Vec<(LogSum, LogSum)> = if high == 0 {
        vec![block(0)]
    } else {
        (0..1u64 << high).into_par_iter().map(block).collect()
    };
    let mut z = LogSum::new();
    let mut m = LogSum::new();
    for (pz, pm) in &parts {
        z.merge(pz);
        m.merge(pm);
    }
    Ok((z, m))
}

/// `ln Z` by exhaustive enumeration.
pub fn log_partition_brute(model: &IsingModel) -> Result<f64> {
    Ok(enumerate(model, 0..0)?.0.ln())
}

pub fn partition_brute(model: &IsingModel) -> Result<f64> {
    log_partition_brute(model).map(f64::exp)
}

/// Mean of `⟨sᵢ⟩` over the sites in `range`.
pub fn magnetization_brute(model: &IsingModel, range: Range<usize>) -> Result<f64> {
    if range.is_empty() || range.end > model.len() {
        return Err(Error::invalid(format!(
            "site range {range:?} must be nonempty and within 0..{}",
            model.len()
        )));
    }
    let count = range.len() as f64;
    let (z, m) = enumerate(model, range)?;
    let ratio = m.mantissa() / z.mantissa() * (m.max_exponent() - z.max_exponent()).exp();
    Ok(ratio / count)
}

/// Middle third of an `n`-site chain.
pub fn bulk_range(n: usize) -> Range<usize> {
    let cut = n / 3;
    cut..n - cut
}

/// Thermodynamic-limit magnetization of the homogeneous N=1 chain:
/// `(1 − (1/π)∫₀^π θ₁²/(θ₄²cosh²βH − θ₁²sinh²βH) dν)·tanh βH`, nome `q²`.
///
/// `q = 0` is accepted as the decoupled limit, where `θ₁ ≡ 0`.
pub fn magnetization_thermo(q: f64, beta_h: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::invalid(format!("q must lie in [0, 1), got {q}")));
    }
    if !beta_h.is_finite() {
        return Err(Error::invalid("field must be finite"));
    }
    let nome = ThetaNome::new(q * q)?;
    let (c2, s2) = (beta_h.cosh().powi(2), beta_h.sinh().powi(2));
    let integrand = |nu: f64| {
        let t1 = theta1(nu, nome).powi(2);
        let t4 = theta4(nu, nome).powi(2);
        t1 / (t4 * c2 - t1 * s2)
    };
    let integral = adaptive_simpson(integrand, 0.0, PI, MAGNETIZATION_QUAD_TOL)?;
    Ok((1.0 - integral / PI) * beta_h.tanh())
}
