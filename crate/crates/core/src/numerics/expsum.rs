//! Exact calculus on finite exponential sums `x ↦ Σ aₘ e^{bₘ x}`.
//!
//! Products, derivatives and Wronskians of exponential sums are again
//! exponential sums, so every soliton tau function and every Crum
//! transform over a constant base potential can be carried symbolically
//! and only evaluated at the very end.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Rates closer than this (in absolute value) are merged into one term.
pub const RATE_MERGE_TOL: f64 = 1e-12;

/// Terms whose merged coefficient is below this multiple of the summed
/// magnitudes of their contributions are treated as cancelled.
const CANCELLATION_ULPS: f64 = 16.0 * f64::EPSILON;

/// One term `coeff · e^{rate · x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub rate: Complex64,
}

/// Canonical exponential sum: pairwise distinct rates, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpSum {
    terms: Vec<Term>,
}

/// A term together with the magnitude of everything that was summed into it.
#[derive(Clone, Copy)]
struct Accum {
    coeff: Complex64,
    rate: Complex64,
    magnitude: f64,
}

fn canonicalize(mut raw: Vec<Accum>) -> ExpSum {
    raw.sort_by(|a, b| {
        a.rate
            .re
            .total_cmp(&b.rate.re)
            .then(a.rate.im.total_cmp(&b.rate.im))
    });
    let mut groups: Vec<Accum> = Vec::with_capacity(raw.len());
    for t in raw {
        let mut merged = false;
        for g in groups.iter_mut().rev() {
            if t.rate.re - g.rate.re >= RATE_MERGE_TOL {
                break;
            }
            if (t.rate - g.rate).norm() < RATE_MERGE_TOL {
                g.coeff += t.coeff;
                g.magnitude += t.magnitude;
                merged = true;
                break;
            }
        }
        if !merged {
            groups.push(t);
        }
    }
    let terms = groups
        .into_iter()
        .filter(|g| g.coeff != Complex64::new(0.0, 0.0) && g.coeff.norm() > CANCELLATION_ULPS * g.magnitude)
        .map(|g| Term {
            coeff: g.coeff,
            rate: g.rate,
        })
        .collect();
    ExpSum { terms }
}

impl ExpSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Self::from_terms([(c.into(), Complex64::new(0.0, 0.0))])
    }

    /// `coeff · e^{rate x}`.
    pub fn exp(coeff: impl Into<Complex64>, rate: impl Into<Complex64>) -> Self {
        Self::from_terms([(coeff.into(), rate.into())])
    }

    /// `cosh(rate · x + shift)`.
    pub fn cosh(rate: f64, shift: f64) -> Self {
        Self::from_terms([
            (Complex64::new(0.5 * shift.exp(), 0.0), Complex64::new(rate, 0.0)),
            (Complex64::new(0.5 * (-shift).exp(), 0.0), Complex64::new(-rate, 0.0)),
        ])
    }

    /// `sinh(rate · x + shift)`.
    pub fn sinh(rate: f64, shift: f64) -> Self {
        Self::from_terms([
            (Complex64::new(0.5 * shift.exp(), 0.0), Complex64::new(rate, 0.0)),
            (Complex64::new(-0.5 * (-shift).exp(), 0.0), Complex64::new(-rate, 0.0)),
        ])
    }

    /// Builds a canonical sum from `(coefficient, rate)` pairs.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (Complex64, Complex64)>,
    {
        canonicalize(
            terms
                .into_iter()
                .map(|(coeff, rate)| Accum {
                    coeff,
                    rate,
                    magnitude: coeff.norm(),
                })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self::from_terms(self.terms.iter().map(|t| (t.coeff * c, t.rate)))
    }

    /// Direct evaluation. May overflow when `|rate · x|` exceeds ~700;
    /// ratios such as log-derivatives should go through
    /// [`ExpSum::log_derivatives`] instead.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| t.coeff * (t.rate * x).exp())
            .sum()
    }

    /// Evaluates the sum as `mantissa · e^{shift}` without overflow.
    pub fn eval_scaled(&self, x: f64) -> (Complex64, f64) {
        let m = self.scaled_moments(x, 0);
        (m.0[0], m.1)
    }

    /// Returns `(m, s)` with `m[k] = e^{-s} Σ aₘ bₘᵏ e^{bₘ x}` for `k ≤ order`.
    fn scaled_moments(&self, x: f64, order: usize) -> (Vec<Complex64>, f64) {
        let mut moments = vec![Complex64::new(0.0, 0.0); order + 1];
        if self.terms.is_empty() {
            return (moments, 0.0);
        }
        let logs: Vec<Complex64> = self
            .terms
            .iter()
            .map(|t| t.coeff.ln() + t.rate * x)
            .collect();
        let shift = logs
            .iter()
            .map(|l| l.re)
            .fold(f64::NEG_INFINITY, f64::max);
        for (t, l) in self.terms.iter().zip(&logs) {
            let mut w = (l - shift).exp();
            for m in moments.iter_mut() {
                *m += w;
                w *= t.rate;
            }
        }
        (moments, shift)
    }

    /// Derivatives of `log f` at `x`: entry `k-1` is `(d/dx)ᵏ log f`, for `k = 1..=order`.
    ///
    /// Computed from the scale-free ratios `f⁽ᵏ⁾/f` through the
    /// moment-to-cumulant recursion, so it stays finite wherever `f ≠ 0`
    /// even when `f` itself overflows.
    pub fn log_derivatives(&self, x: f64, order: usize) -> Vec<Complex64> {
        let (m, _) = self.scaled_moments(x, order);
        let r: Vec<Complex64> = m.iter().map(|mk| mk / m[0]).collect();
        let mut kappa = vec![Complex64::new(0.0, 0.0); order + 1];
        for n in 1..=order {
            let mut acc = r[n];
            let mut binom = 1.0;
            for k in 1..n {
                // binom = C(n-1, k-1)
                acc -= binom * kappa[k] * r[n - k];
                binom = binom * (n - k) as f64 / k as f64;
            }
            kappa[n] = acc;
        }
        kappa.remove(0);
        kappa
    }

    /// Exact `order`-th derivative.
    pub fn derivative(&self, order: u32) -> Self {
        if order == 0 {
            return self.clone();
        }
        Self::from_terms(
            self.terms
                .iter()
                .map(|t| (t.coeff * t.rate.powu(order), t.rate)),
        )
    }

    /// Exact pointwise product.
    pub fn product(&self, other: &ExpSum) -> Self {
        let mut raw = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                let coeff = a.coeff * b.coeff;
                raw.push(Accum {
                    coeff,
                    rate: a.rate + b.rate,
                    magnitude: coeff.norm(),
                });
            }
        }
        canonicalize(raw)
    }

    /// Exact Wronskian `det(∂ₓⁱ fₖ)` of the given sums.
    ///
    /// By multilinearity the determinant splits into one Vandermonde
    /// determinant per choice of a term from every function:
    /// `W(e^{b₀x},…,e^{bₙ₋₁x}) = Π_{i<j}(bⱼ − bᵢ) e^{(Σb)x}`.
    pub fn wronskian(fs: &[ExpSum]) -> Result<ExpSum> {
        if fs.is_empty() {
            return Err(Error::invalid("Wronskian of an empty list"));
        }
        if fs.iter().any(ExpSum::is_zero) {
            return Ok(ExpSum::zero());
        }
        let n = fs.len();
        let sizes: Vec<usize> = fs.iter().map(ExpSum::len).collect();
        let total: usize = sizes.iter().product();
        let mut choice = vec![0usize; n];
        let mut raw = Vec::with_capacity(total);
        for _ in 0..total {
            let picked: Vec<&Term> = (0..n).map(|k| &fs[k].terms[choice[k]]).collect();
            let mut coeff = Complex64::new(1.0, 0.0);
            let mut rate = Complex64::new(0.0, 0.0);
            for t in &picked {
                coeff *= t.coeff;
                rate += t.rate;
            }
            for j in 0..n {
                for i in 0..j {
                    coeff *= picked[j].rate - picked[i].rate;
                }
            }
            raw.push(Accum {
                coeff,
                rate,
                magnitude: coeff.norm(),
            });
            // mixed-radix increment
            for k in 0..n {
                choice[k] += 1;
                if choice[k] < sizes[k] {
                    break;
                }
                choice[k] = 0;
            }
        }
        Ok(canonicalize(raw))
    }

    /// Largest real part among the rates; the growth exponent as `x → +∞`.
    pub fn max_rate(&self) -> Option<f64> {
        self.terms
            .iter()
            .map(|t| t.rate.re)
            .max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
    }
}

impl Add for &ExpSum {
    type Output = ExpSum;
    fn add(self, rhs: &ExpSum) -> ExpSum {
        ExpSum::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|t| (t.coeff, t.rate)),
        )
    }
}

impl Sub for &ExpSum {
    type Output = ExpSum;
    fn sub(self, rhs: &ExpSum) -> ExpSum {
        self + &(-rhs)
    }
}

impl Neg for &ExpSum {
    type Output = ExpSum;
    fn neg(self) -> ExpSum {
        ExpSum {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: -t.coeff,
                    rate: t.rate,
                })
                .collect(),
        }
    }
}

impl Mul for &ExpSum {
    type Output = ExpSum;
    fn mul(self, rhs: &ExpSum) -> ExpSum {
        self.product(rhs)
    }
}
