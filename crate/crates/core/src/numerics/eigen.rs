//! Lowest eigenpairs of `−∂ₓ² + u` with Dirichlet ends.
//!
//! The second-order central-difference discretization on the interior
//! nodes is a symmetric tridiagonal matrix. Eigenvalues come from Sturm
//! sequence bisection, eigenvectors from inverse iteration.

use log::warn;
use num_complex::Complex64;

use super::grid::GridFunction;
use crate::error::{Error, Result};

/// Eigenfunctions whose boundary magnitude exceeds this fraction of their
/// maximum trigger a decay warning: the box is too small for that state.
pub const DECAY_WARNING_RATIO: f64 = 1e-8;

/// Components below this fraction of the maximum are ignored when fixing the sign.
const SIGN_THRESHOLD: f64 = 1e-8;

const INVERSE_ITERATIONS: usize = 3;

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    /// Unit norm in the `h`-weighted discrete inner product; zero at both ends.
    pub function: GridFunction,
    /// Largest interior-edge magnitude relative to the maximum.
    pub boundary_ratio: f64,
}

impl Eigenpair {
    pub fn is_decayed(&self) -> bool {
        self.boundary_ratio <= DECAY_WARNING_RATIO
    }
}

/// The `count` lowest eigenpairs of the finite-difference Schrödinger operator.
pub fn fd_eigen(u: &GridFunction, count: usize) -> Result<Vec<Eigenpair>> {
    let potential = u.real_values()?;
    let grid = *u.grid();
    let n = grid.len();
    let m = n - 2;
    if count == 0 || count > m {
        return Err(Error::invalid(format!(
            "eigenpair count must lie in 1..={m}, got {count}"
        )));
    }
    let h = grid.spacing();
    let kinetic = 1.0 / (h * h);
    let diag: Vec<f64> = potential[1..n - 1].iter().map(|v| 2.0 * kinetic + v).collect();
    let off = vec![-kinetic; m - 1];

    let pairs = symmetric_tridiagonal_eigen(&diag, &off, count);
    let mut out = Vec::with_capacity(count);
    for (k, (value, vec)) in pairs.into_iter().enumerate() {
        let norm = (vec.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
        let max = vec.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let sign = vec
            .iter()
            .find(|v| v.abs() > SIGN_THRESHOLD * max)
            .map_or(1.0, |v| v.signum());
        let scale = sign / norm;
        let mut values = Vec::with_capacity(n);
        values.push(Complex64::new(0.0, 0.0));
        values.extend(vec.iter().map(|v| Complex64::new(v * scale, 0.0)));
        values.push(Complex64::new(0.0, 0.0));
        let boundary_ratio = vec[0].abs().max(vec[m - 1].abs()) / max;
        if boundary_ratio > DECAY_WARNING_RATIO {
            warn!(
                "eigenfunction {k} (λ = {value}) has boundary ratio {boundary_ratio:e}; \
                 enlarge the domain"
            );
        }
        out.push(Eigenpair {
            value,
            function: GridFunction::new(grid, values)?,
            boundary_ratio,
        });
    }
    Ok(out)
}

/// Number of eigenvalues strictly below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q.abs() < pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        q = diag[i] - x - off[i - 1] * off[i - 1] / q;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let m = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < m { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// The `count` smallest eigenvalues of a symmetric tridiagonal matrix, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64], count: usize) -> Vec<f64> {
    assert_eq!(off.len() + 1, diag.len(), "off-diagonal length");
    let (lo0, hi0) = gershgorin(diag, off);
    let norm = lo0.abs().max(hi0.abs()).max(f64::MIN_POSITIVE);
    let pivmin = f64::MIN_POSITIVE.sqrt() * norm.max(1.0);
    let count = count.min(diag.len());
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut lo = lo0 - f64::EPSILON * norm;
        let mut hi = hi0 + f64::EPSILON * norm;
        if let Some(&prev) = out.last() {
            lo = lo.max(prev);
        }
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(diag, off, mid, pivmin) > k {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}

/// The `count` smallest eigenpairs (unnormalized-sign, unit Euclidean norm vectors).
pub fn symmetric_tridiagonal_eigen(diag: &[f64], off: &[f64], count: usize) -> Vec<(f64, Vec<f64>)> {
    let values = tridiagonal_eigenvalues(diag, off, count);
    let (lo, hi) = gershgorin(diag, off);
    let norm = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    let cluster = 1e-7 * norm;
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(values.len());
    for &lambda in &values {
        let mut v = start_vector(diag.len());
        let lu = TridiagonalLu::factor(off, diag, off, lambda, norm);
        for _ in 0..INVERSE_ITERATIONS {
            lu.solve(&mut v);
            for (mu, w) in &pairs {
                if (mu - lambda).abs() < cluster {
                    let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                    v.iter_mut().zip(w).for_each(|(a, b)| *a -= dot * b);
                }
            }
            let nrm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= nrm);
        }
        pairs.push((lambda, v));
    }
    pairs
}

fn start_vector(m: usize) -> Vec<f64> {
    // Deterministic pseudo-random entries in [0.5, 1.5): no symmetry to hide a mode.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    (0..m)
        .map(|_| {
            state = state
                .wrapping_mul(6_364_136_223_846_793_005)
                .wrapping_add(1_442_695_040_888_963_407);
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

/// LU factorization with partial pivoting of `T − shift·I`.
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(lower: &[f64], diag: &[f64], upper: &[f64], shift: f64, norm: f64) -> Self {
        let n = diag.len();
        let mut dl = lower.to_vec();
        let mut d: Vec<f64> = diag.iter().map(|a| a - shift).collect();
        let mut du = upper.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        let tiny = f64::EPSILON * norm;
        for di in d.iter_mut() {
            if di.abs() < tiny {
                *di = if *di < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::grid::Grid;
    use std::f64::consts::PI;

    #[test]
    fn particle_in_a_box() {
        let g = Grid::new(0.0, PI, 2001).unwrap();
        let u = GridFunction::from_real_fn(g, |_| 0.0);
        let e = fd_eigen(&u, 3).unwrap();
        for (k, p) in e.iter().enumerate() {
            let exact = ((k + 1) * (k + 1)) as f64;
            assert!((p.value - exact).abs() < 1e-4 * exact, "{} vs {exact}", p.value);
        }
    }

    #[test]
    fn harmonic_spectrum_is_odd_integers() {
        let g = Grid::symmetric(12.0, 4001).unwrap();
        let u = GridFunction::from_real_fn(g, |x| x * x);
        let e = fd_eigen(&u, 5).unwrap();
        for (k, p) in e.iter().enumerate() {
            assert!((p.value - (2 * k + 1) as f64).abs() < 1e-4);
            assert!(p.is_decayed());
        }
    }

    #[test]
    fn sech_well_ground_state() {
        let g = Grid::symmetric(20.0, 8001).unwrap();
        let u = GridFunction::from_real_fn(g, |x| -2.0 / x.cosh().powi(2));
        let e = fd_eigen(&u, 1).unwrap();
        assert!((e[0].value + 1.0).abs() < 1e-4);
    }

    #[test]
    fn eigenvectors_are_normalized_orthogonal_and_signed() {
        let g = Grid::symmetric(10.0, 801).unwrap();
        let u = GridFunction::from_real_fn(g, |x| x * x);
        let e = fd_eigen(&u, 4).unwrap();
        let h = g.spacing();
        for (i, a) in e.iter().enumerate() {
            let first = a.function.values().iter().find(|v| v.norm() > 1e-6).unwrap();
            assert!(first.re > 0.0);
            for (j, b) in e.iter().enumerate() {
                let dot: f64 = a
                    .function
                    .values()
                    .iter()
                    .zip(b.function.values())
                    .map(|(x, y)| x.re * y.re)
                    .sum::<f64>()
                    * h;
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-10, "<{i}|{j}> = {dot}");
            }
        }
    }

    #[test]
    fn residual_of_eigenvectors() {
        let diag = vec![2.0, 3.0, 1.0, 4.0, 0.5];
        let off = vec![1.0, -0.5, 0.25, 2.0];
        for (lambda, v) in symmetric_tridiagonal_eigen(&diag, &off, 5) {
            for i in 0..5 {
                let mut tv = diag[i] * v[i];
                if i > 0 {
                    tv += off[i - 1] * v[i - 1];
                }
                if i < 4 {
                    tv += off[i] * v[i + 1];
                }
                assert!((tv - lambda * v[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_complex_potential_and_bad_count() {
        let g = Grid::new(0.0, 1.0, 10).unwrap();
        let u = GridFunction::from_fn(g, |x| Complex64::new(x, 1.0));
        assert!(fd_eigen(&u, 1).is_err());
        let u = GridFunction::from_real_fn(g, |_| 0.0);
        assert!(fd_eigen(&u, 0).is_err());
        assert!(fd_eigen(&u, 9).is_err());
        assert!(fd_eigen(&u, 8).is_ok());
    }
}
