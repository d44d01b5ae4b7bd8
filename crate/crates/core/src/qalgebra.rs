//! q-oscillator algebra, the N=1 self-similar potential and the advanced
//! pantograph equation of the free-particle q-algebra.
//!
//! The self-similar reduction `fⱼ(x) = qʲf(qʲx)` turns the factorization chain
//! into the single delay equation
//! `f'(x) + q²f'(qx) + f²(x) − q²f²(qx) = μ`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::diff::{derivative, BOUNDARY_LAYERS};
use crate::numerics::eigen::{fd_eigen, Eigenpair};
use crate::numerics::grid::{Grid, GridFunction};
use crate::oscillator::FockOperator;

/// Default number of odd Taylor coefficients' top degree.
pub const DEFAULT_SERIES_DEGREE: usize = 41;

/// Right end of the series-seeded patch.
pub const SEED_RADIUS: f64 = 0.5;

/// Default marching step of [`selfsim_extend`].
pub const DEFAULT_MARCH_STEP: f64 = 2e-3;

/// Largest admissible reduced-chain residual.
pub const CHAIN_TOLERANCE: f64 = 1e-8;

/// `|f|` above which the march reports a blow-up.
pub const BLOW_UP_LIMIT: f64 = 1e6;

/// Largest admissible value jump at a pantograph patch joint.
pub const JOINT_TOLERANCE: f64 = 1e-10;

/// `[n]_{q²} = (1 − q²ⁿ)/(1 − q²)`.
pub fn q_number(n: usize, q2: f64) -> Result<f64> {
    check_q2(q2)?;
    Ok((1.0 - q2.powi(n as i32)) / (1.0 - q2))
}

/// `[n]_{q²}! = [1][2]⋯[n]`.
pub fn q_factorial(n: usize, q2: f64) -> Result<f64> {
    check_q2(q2)?;
    (1..=n).try_fold(1.0, |acc, k| Ok(acc * q_number(k, q2)?))
}

fn check_q2(q2: f64) -> Result<()> {
    if !q2.is_finite() || q2 == 1.0 {
        return Err(Error::invalid(format!("q² must be finite and ≠ 1, got {q2}")));
    }
    Ok(())
}

/// Deformation parameter, chain constant `μ = λ₁ − λ₀` and ground level `λ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParams {
    q: f64,
    mu: f64,
    lambda0: f64,
}

impl QParams {
    /// `λ₀ = μ/(q² − 1)`.
    pub fn new(q: f64, mu: f64) -> Result<Self> {
        if !(q.is_finite() && q != 0.0 && q * q < 1.0) {
            return Err(Error::invalid(format!("need 0 < q² < 1, got q = {q}")));
        }
        if !mu.is_finite() {
            return Err(Error::invalid(format!("mu must be finite, got {mu}")));
        }
        Ok(Self {
            q,
            mu,
            lambda0: mu / (q * q - 1.0),
        })
    }

    /// The q-oscillator normalization `μ = 1`, `λ₀ = 1/(q² − 1)`.
    pub fn oscillator(q: f64) -> Result<Self> {
        Self::new(q, 1.0)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn q2(&self) -> f64 {
        self.q * self.q
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda0
    }
}

/// `λₙ = λ₀q²ⁿ`, ascending.
pub fn q_spectrum(params: &QParams, count: usize) -> Vec<f64> {
    let q2 = params.q2();
    let mut out: Vec<f64> = (0..count)
        .map(|n| params.lambda0 * q2.powi(n as i32))
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// `λ_{kN+m} = λₘq²ᵏ` for the first `count` indices.
pub fn selfsim_spectrum(lambdas: &[f64], q: f64, count: usize) -> Result<Vec<f64>> {
    if lambdas.is_empty() {
        return Err(Error::invalid("need at least one generating level"));
    }
    if !(q.is_finite() && q != 0.0 && q * q < 1.0) {
        return Err(Error::invalid(format!("need 0 < q² < 1, got q = {q}")));
    }
    if lambdas.iter().any(|l| !(*l < 0.0)) {
        return Err(Error::invalid("generating levels must be negative"));
    }
    if lambdas.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("generating levels must be strictly ascending"));
    }
    let n = lambdas.len();
    let q2 = q * q;
    Ok((0..count)
        .map(|i| lambdas[i % n] * q2.powi((i / n) as i32))
        .collect())
}

/// `(A, A⁺)` with `√[n+1]_{q²}` on the first subdiagonal of `A⁺`.
pub fn q_oscillator_matrices(params: &QParams, m: usize) -> Result<(FockOperator, FockOperator)> {
    if m < 2 {
        return Err(Error::invalid(format!("q-oscillator needs M ≥ 2, got {m}")));
    }
    let q2 = params.q2();
    let mut a_dag = DMatrix::zeros(m, m);
    for n in 0..m - 1 {
        a_dag[(n + 1, n)] = Complex64::new(q_number(n + 1, q2)?.sqrt(), 0.0);
    }
    let a = a_dag.transpose();
    Ok((FockOperator::from_matrix(a)?, FockOperator::from_matrix(a_dag)?))
}

/// Odd Taylor series of `f` on the antisymmetric branch.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfSimSolution {
    params: QParams,
    /// `c₁, c₃, c₅, …`
    odd_coeffs: Vec<f64>,
    radius: f64,
}

impl SelfSimSolution {
    pub fn params(&self) -> &QParams {
        &self.params
    }

    pub fn odd_coeffs(&self) -> &[f64] {
        &self.odd_coeffs
    }

    /// Coefficient of `xⁿ`.
    pub fn coeff(&self, n: usize) -> f64 {
        if n % 2 == 0 {
            0.0
        } else {
            self.odd_coeffs.get(n / 2).copied().unwrap_or(0.0)
        }
    }

    pub fn degree(&self) -> usize {
        2 * self.odd_coeffs.len() - 1
    }

    /// Radius on which the last retained term stays below `1e−16`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `(f(x), f'(x))`.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let x2 = x * x;
        let mut f = 0.0;
        let mut df = 0.0;
        for (k, &c) in self.odd_coeffs.iter().enumerate().rev() {
            let n = (2 * k + 1) as f64;
            f = f * x2 + c;
            df = df * x2 + n * c;
        }
        (f * x, df)
    }
}

/// Matches powers of `x` in the reduced chain up to `degree`.
pub fn selfsim_series(params: &QParams, degree: usize) -> Result<SelfSimSolution> {
    if degree % 2 == 0 {
        return Err(Error::invalid(format!("series degree must be odd, got {degree}")));
    }
    let q = params.q.abs();
    let mut c = vec![0.0; degree + 1];
    c[1] = params.mu / (1.0 + q * q);
    for n in (2..degree).step_by(2) {
        let s: f64 = (1..n).map(|k| c[k] * c[n - k]).sum();
        let qn = q.powi(n as i32 + 2);
        c[n + 1] = -s * (1.0 - qn) / ((n + 1) as f64 * (1.0 + qn));
    }
    let top = c[degree].abs();
    let radius = if top == 0.0 {
        f64::INFINITY
    } else {
        (1e-16 / top).powf(1.0 / degree as f64)
    };
    Ok(SelfSimSolution {
        params: *params,
        odd_coeffs: c.into_iter().skip(1).step_by(2).collect(),
        radius,
    })
}

/// `f` and `f'` on `[0, X]` with the reduced-chain residual of the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfSimProfile {
    pub f: GridFunction,
    pub df: GridFunction,
    pub residual: f64,
}

/// Cubic Lagrange interpolation of uniformly spaced odd/even data at `t ≥ 0`.
struct MeshInterp<'a> {
    values: &'a [f64],
    h: f64,
    odd: bool,
}

impl MeshInterp<'_> {
    fn node(&self, j: isize) -> f64 {
        if j >= 0 {
            self.values[j as usize]
        } else if self.odd {
            -self.values[(-j) as usize]
        } else {
            self.values[(-j) as usize]
        }
    }

    /// Interpolates from nodes `≤ last`.
    fn at(&self, t: f64, last: usize) -> f64 {
        let s = t / self.h;
        let mut k = s.floor() as isize;
        k = k.min(last as isize - 2);
        let u = s - k as f64;
        let (p0, p1, p2, p3) = (
            self.node(k - 1),
            self.node(k),
            self.node(k + 1),
            self.node(k + 2),
        );
        -u * (u - 1.0) * (u - 2.0) / 6.0 * p0 + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * p1
            - (u + 1.0) * u * (u - 2.0) / 2.0 * p2
            + (u + 1.0) * u * (u - 1.0) / 6.0 * p3
    }
}

/// [`selfsim_extend_from`] with the default seed patch `[0, min(0.5, R)]`.
pub fn selfsim_extend(sol: &SelfSimSolution, x_max: f64, h: f64) -> Result<SelfSimProfile> {
    selfsim_extend_from(sol, SEED_RADIUS.min(sol.radius), x_max, h)
}

/// Integrates `f' = μ − q²f'(qx) − f² + q²f²(qx)` by RK4 from the series patch
/// `[0, seed]` out to `x_max`; `f(qx)` and `f'(qx)` come from cubic
/// interpolation of the stored samples.
pub fn selfsim_extend_from(
    sol: &SelfSimSolution,
    seed: f64,
    x_max: f64,
    h: f64,
) -> Result<SelfSimProfile> {
    if !(x_max > 0.0 && x_max.is_finite()) || !(h > 0.0 && h < x_max) {
        return Err(Error::invalid(format!(
            "need 0 < h < X, got h = {h}, X = {x_max}"
        )));
    }
    if !(seed > 0.0 && seed <= sol.radius) {
        return Err(Error::invalid(format!(
            "seed patch [0, {seed}] exceeds the series radius {}",
            sol.radius
        )));
    }
    let n = (x_max / h).round() as usize + 1;
    let h = x_max / (n - 1) as f64;
    let q = sol.params.q.abs();
    let q2 = q * q;
    let mu = sol.params.mu;
    let n_seed = ((seed / h).floor() as usize + 1).min(n);
    if n_seed < n && (n_seed as f64 - 1.0) * (1.0 - q) < q + 3.0 {
        return Err(Error::invalid(format!(
            "seed patch [0, {seed}] too short for step {h} at q = {q}"
        )));
    }
    if n_seed < 4 && n_seed < n {
        return Err(Error::invalid("seed patch must hold at least four nodes"));
    }

    let mut f = vec![0.0; n];
    let mut df = vec![0.0; n];
    for i in 0..n_seed {
        (f[i], df[i]) = sol.eval(i as f64 * h);
    }
    for i in n_seed - 1..n - 1 {
        let x = i as f64 * h;
        let rhs = |xs: f64, y: f64, f: &[f64], df: &[f64]| {
            let fi = MeshInterp { values: f, h, odd: true };
            let di = MeshInterp { values: df, h, odd: false };
            let fq = fi.at(q * xs, i);
            mu - q2 * di.at(q * xs, i) - y * y + q2 * fq * fq
        };
        let y = f[i];
        let k1 = df[i];
        let k2 = rhs(x + 0.5 * h, y + 0.5 * h * k1, &f, &df);
        let k3 = rhs(x + 0.5 * h, y + 0.5 * h * k2, &f, &df);
        let k4 = rhs(x + h, y + h * k3, &f, &df);
        let next = y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !(next.abs() <= BLOW_UP_LIMIT) {
            return Err(Error::BlowUp {
                x: x + h,
                value: next.abs(),
            });
        }
        f[i + 1] = next;
        df[i + 1] = rhs(x + h, next, &f, &df);
    }

    let residual = chain_residual(&f, h, q, mu);
    if !(residual <= CHAIN_TOLERANCE) {
        return Err(Error::Residual {
            what: "reduced self-similar chain".into(),
            value: residual,
            tolerance: CHAIN_TOLERANCE,
        });
    }
    let grid = Grid::new(0.0, x_max, n)?;
    Ok(SelfSimProfile {
        f: GridFunction::from_real(grid, f)?,
        df: GridFunction::from_real(grid, df)?,
        residual,
    })
}

/// Max-norm of the reduced chain with finite-difference derivatives.
fn chain_residual(f: &[f64], h: f64, q: f64, mu: f64) -> f64 {
    let n = f.len();
    // Odd reflection keeps the central stencil valid at x = 0.
    let cplx: Vec<Complex64> = (1..=BOUNDARY_LAYERS)
        .rev()
        .map(|j| -f[j])
        .chain(f.iter().copied())
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    let d: Vec<f64> = derivative(&cplx, h)
        .into_iter()
        .skip(BOUNDARY_LAYERS)
        .map(|z| z.re)
        .collect();
    let fi = MeshInterp { values: f, h, odd: true };
    let di = MeshInterp { values: &d, h, odd: false };
    let q2 = q * q;
    let r: Vec<f64> = (0..n)
        .map(|i| {
            let x = i as f64 * h;
            let fq = fi.at(q * x, n - 1 - BOUNDARY_LAYERS);
            (d[i] + q2 * di.at(q * x, n - 1 - BOUNDARY_LAYERS) + f[i] * f[i] - q2 * fq * fq - mu)
                .abs()
        })
        .collect();
    r[..n - BOUNDARY_LAYERS].iter().copied().fold(0.0, f64::max)
}

/// Self-similar `f`, `u₀ = f² − f' + λ₀` and the finite-difference bound states.
#[derive(Debug, Clone)]
pub struct SelfSimSpectrum {
    pub f: GridFunction,
    pub u: GridFunction,
    pub eigenpairs: Vec<Eigenpair>,
    /// `μ/(q² − 1)`.
    pub lambda0: f64,
    /// Reduced-chain residual of the march.
    pub chain_residual: f64,
}

impl SelfSimSpectrum {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigenpairs.iter().map(|e| e.value).collect()
    }

    /// `λ_{k+1}/λ_k`.
    pub fn ratios(&self) -> Vec<f64> {
        self.eigenpairs
            .windows(2)
            .map(|w| w[1].value / w[0].value)
            .collect()
    }
}

/// Builds `u₀` on the symmetric grid `[−X, X]` (odd node count) and solves for
/// `count` levels.
pub fn selfsim_potential_and_spectrum(
    params: &QParams,
    x_max: f64,
    n_points: usize,
    count: usize,
) -> Result<SelfSimSpectrum> {
    if n_points % 2 == 0 || n_points < 5 {
        return Err(Error::invalid(format!(
            "need an odd node count ≥ 5 so that x = 0 is a node, got {n_points}"
        )));
    }
    let grid = Grid::symmetric(x_max, n_points)?;
    let spacing = grid.spacing();
    let sub = (spacing / DEFAULT_MARCH_STEP).ceil().max(1.0) as usize;
    let half = n_points / 2;
    let sol = selfsim_series(params, DEFAULT_SERIES_DEGREE)?;
    let profile = selfsim_extend(&sol, x_max, spacing / sub as f64)?;
    let fv = profile.f.real_values()?;
    let dv = profile.df.real_values()?;
    let (f, u): (Vec<f64>, Vec<f64>) = (0..n_points)
        .map(|i| {
            let k = i.abs_diff(half) * sub;
            let sign = if i < half { -1.0 } else { 1.0 };
            let fk = sign * fv[k];
            (fk, fk * fk - dv[k] + params.lambda0)
        })
        .unzip();
    let u = GridFunction::from_real(grid, u)?;
    let eigenpairs = fd_eigen(&u, count)?;
    Ok(SelfSimSpectrum {
        f: GridFunction::from_real(grid, f)?,
        u,
        eigenpairs,
        lambda0: params.lambda0,
        chain_residual: profile.residual,
    })
}

/// Piecewise polynomial in the global variable `x` with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    breaks: Vec<f64>,
    coeffs: Vec<Vec<Complex64>>,
}

fn horner(c: &[Complex64], x: f64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

fn horner_derivative(c: &[Complex64], x: f64) -> Complex64 {
    c.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &a)| acc * x + a * k as f64)
}

impl PiecewisePoly {
    /// `coeffs[i]` holds the monomial coefficients on `[breaks[i], breaks[i+1]]`.
    pub fn new(breaks: Vec<f64>, coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        if breaks.len() < 2 || coeffs.len() + 1 != breaks.len() {
            return Err(Error::invalid(
                "need one coefficient list per interval and at least one interval",
            ));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("breakpoints must be finite and strictly ascending"));
        }
        if coeffs.iter().any(|c| c.is_empty()) {
            return Err(Error::invalid("every interval needs at least one coefficient"));
        }
        Ok(Self { breaks, coeffs })
    }

    pub fn constant(lo: f64, hi: f64, value: Complex64) -> Result<Self> {
        Self::new(vec![lo, hi], vec![vec![value]])
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn coeffs(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breaks[0], self.breaks[self.breaks.len() - 1])
    }

    /// Largest polynomial degree over all intervals.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().map(|c| c.len() - 1).max().unwrap_or(0)
    }

    fn piece(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return None;
        }
        let i = self.breaks.partition_point(|&b| b <= x);
        Some(i.saturating_sub(1).min(self.coeffs.len() - 1))
    }

    pub fn eval(&self, x: f64) -> Option<Complex64> {
        self.piece(x).map(|i| horner(&self.coeffs[i], x))
    }

    pub fn eval_derivative(&self, x: f64) -> Option<Complex64> {
        self.piece(x).map(|i| horner_derivative(&self.coeffs[i], x))
    }
}

/// Extension of a pantograph seed with per-pass diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PantographExtension {
    pub poly: PiecewisePoly,
    /// `|ψ(b⁺) − ψ(b⁻)|` at each interior breakpoint.
    pub joint_jumps: Vec<(f64, f64)>,
    /// `sup|ψ|` over the seed and then over each generated pass.
    pub patch_sup: Vec<f64>,
    /// Equation residual on piece interiors whose image `x/q` is constructed.
    pub residual: f64,
}

impl PantographExtension {
    pub fn max_joint_jump(&self) -> f64 {
        self.joint_jumps.iter().map(|j| j.1).fold(0.0, f64::max)
    }

    pub fn is_consistent(&self) -> bool {
        self.max_joint_jump() <= JOINT_TOLERANCE
    }

    /// `Err` when some joint jump exceeds [`JOINT_TOLERANCE`].
    pub fn check_joints(&self) -> Result<()> {
        let value = self.max_joint_jump();
        if value > JOINT_TOLERANCE {
            return Err(Error::Residual {
                what: "pantograph patch joints".into(),
                value,
                tolerance: JOINT_TOLERANCE,
            });
        }
        Ok(())
    }
}

const RESIDUAL_SAMPLES_PER_PIECE: usize = 32;

fn sup_on(poly: &PiecewisePoly, lo: f64, hi: f64) -> f64 {
    let n = 256;
    (0..=n)
        .filter_map(|k| poly.eval(lo + (hi - lo) * k as f64 / n as f64))
        .map(|v| v.norm())
        .fold(0.0, f64::max)
}

/// Extends `ψ' = −αq^{−3/2}ψ(x/q) + κψ`, `κ = q⁻¹/√(1−q²)`, from a seed on
/// `[0, x₀]` to cover `[0, X]` via `ψ(x/q) = (q^{3/2}/(−α))(ψ'(x) − κψ(x))`.
pub fn pantograph_extend(
    alpha: Complex64,
    q: f64,
    seed: &PiecewisePoly,
    x_max: f64,
) -> Result<PantographExtension> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("pantograph needs 0 < q < 1, got {q}")));
    }
    if alpha.norm() == 0.0 || !alpha.norm().is_finite() {
        return Err(Error::invalid("pantograph needs finite nonzero α"));
    }
    let (lo, x0) = seed.domain();
    if lo != 0.0 {
        return Err(Error::invalid(format!("seed must start at 0, got {lo}")));
    }
    if !x_max.is_finite() {
        return Err(Error::invalid("X must be finite"));
    }
    let kappa = 1.0 / (q * (1.0 - q * q).sqrt());
    let c = q.powf(1.5) / -alpha;

    let mut breaks = seed.breaks.clone();
    let mut coeffs = seed.coeffs.clone();
    let mut patch_sup = vec![sup_on(seed, 0.0, x0)];

    // Pieces of the seed restricted to [q x0, x0].
    let mut source: Vec<(f64, f64, Vec<Complex64>)> = Vec::new();
    for (i, p) in seed.coeffs.iter().enumerate() {
        let (a, b) = (seed.breaks[i].max(q * x0), seed.breaks[i + 1]);
        if b > a {
            source.push((a, b, p.clone()));
        }
    }
    let mut end = x0;
    while end < x_max {
        let next: Vec<(f64, f64, Vec<Complex64>)> = source
            .iter()
            .map(|(a, b, p)| {
                let d = p.len();
                let mut qk = 1.0;
                let new: Vec<Complex64> = (0..d)
                    .map(|j| {
                        let dp = if j + 1 < d { p[j + 1] * (j + 1) as f64 * qk } else { Complex64::new(0.0, 0.0) };
                        let v = c * (dp - kappa * p[j] * qk);
                        qk *= q;
                        v
                    })
                    .collect();
                (a / q, b / q, new)
            })
            .collect();
        for (_, b, p) in &next {
            breaks.push(*b);
            coeffs.push(p.clone());
        }
        end /= q;
        source = next;
        let poly = PiecewisePoly {
            breaks: breaks.clone(),
            coeffs: coeffs.clone(),
        };
        patch_sup.push(sup_on(&poly, end * q, end));
    }
    let poly = PiecewisePoly::new(breaks, coeffs)?;

    let joint_jumps: Vec<(f64, f64)> = (1..poly.breaks.len() - 1)
        .map(|i| {
            let b = poly.breaks[i];
            let left = horner(&poly.coeffs[i - 1], b);
            let right = horner(&poly.coeffs[i], b);
            (b, (right - left).norm())
        })
        .collect();

    let end = poly.domain().1;
    let mut residual: f64 = 0.0;
    for i in 0..poly.len() {
        let (a, b) = (poly.breaks[i].max(q * x0), poly.breaks[i + 1]);
        if b <= a || b / q > end * (1.0 + 1e-12) {
            continue;
        }
        for k in 1..RESIDUAL_SAMPLES_PER_PIECE {
            let x = a + (b - a) * k as f64 / RESIDUAL_SAMPLES_PER_PIECE as f64;
            let p = &poly.coeffs[i];
            let Some(adv) = poly.eval(x / q) else { continue };
            let r = horner_derivative(p, x) + alpha * q.powf(-1.5) * adv - kappa * horner(p, x);
            let scale = horner(p, x).norm().max(adv.norm()).max(1.0);
            residual = residual.max(r.norm() / scale);
        }
    }
    Ok(PantographExtension {
        poly,
        joint_jumps,
        patch_sup,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{ladder_ops, FockOperator};

    #[test]
    fn q_numbers() {
        assert_eq!(q_number(0, 0.5).unwrap(), 0.0);
        assert_eq!(q_factorial(0, 0.5).unwrap(), 1.0);
        assert!((q_number(3, 0.5).unwrap() - 1.75).abs() < 1e-15);
        assert!((q_factorial(3, 0.5).unwrap() - 1.5 * 1.75).abs() < 1e-15);
        for n in 1..8 {
            assert!((q_number(n, 1.0 - 1e-8).unwrap() - n as f64).abs() < 1e-5);
        }
        assert!(q_number(2, 1.0).is_err());
    }

    #[test]
    fn spectra() {
        let p = QParams::oscillator(0.5f64.sqrt()).unwrap();
        let s = q_spectrum(&p, 3);
        for (a, b) in s.iter().zip([-2.0, -1.0, -0.5]) {
            assert!((a - b).abs() < 1e-14);
        }
        let g = selfsim_spectrum(&[-1.0], 0.5, 4).unwrap();
        assert_eq!(g, vec![-1.0, -0.25, -0.0625, -0.015625]);
        let two = selfsim_spectrum(&[-3.0, -2.0], 0.5, 4).unwrap();
        assert_eq!(two, vec![-3.0, -2.0, -0.75, -0.5]);
        assert!(s.iter().all(|&l| l < 0.0));
        assert!(selfsim_spectrum(&[-1.0, -2.0], 0.5, 3).is_err());
        assert!(selfsim_spectrum(&[0.5], 0.5, 3).is_err());
    }

    #[test]
    fn q_oscillator_relation() {
        let p = QParams::new(0.8, 1.0).unwrap();
        let m = 20;
        let (a, a_dag) = q_oscillator_matrices(&p, m).unwrap();
        let q2 = Complex64::new(p.q2(), 0.0);
        let lhs = (&a * &a_dag).sub(&(&a_dag * &a).scale(q2));
        assert!(lhs.max_abs_diff_block(&FockOperator::identity(m), m - 1) < 1e-13);
        let vac = a.apply(&crate::oscillator::FockVector::basis(m, 0));
        assert!(vac.norm() == 0.0);
        let h = (&a_dag * &a).sub(&FockOperator::identity(m).scale(Complex64::new(1.0 / (1.0 - p.q2()), 0.0)));
        for n in 0..m {
            let expect = p.q2().powi(n as i32) / (p.q2() - 1.0);
            assert!((h.matrix()[(n, n)].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn q_oscillator_classical_limit() {
        let p = QParams::new((1.0f64 - 1e-8).sqrt(), 1.0).unwrap();
        let (_, a_dag) = q_oscillator_matrices(&p, 12).unwrap();
        let lad = ladder_ops(12).unwrap();
        assert!(a_dag.max_abs_diff_block(&lad.a_dag, 12) < 1e-6);
    }

    #[test]
    fn series_low_coefficients() {
        let p = QParams::new(0.7, 1.3).unwrap();
        let s = selfsim_series(&p, 11).unwrap();
        let q2: f64 = 0.49;
        let c1 = 1.3 / (1.0 + q2);
        assert!((s.coeff(1) - c1).abs() < 1e-15);
        let c3 = -c1 * c1 * (1.0 - q2 * q2) / (3.0 * (1.0 + q2 * q2));
        assert!((s.coeff(3) - c3).abs() < 1e-15);
        assert_eq!(s.coeff(2), 0.0);
        let zero = selfsim_series(&QParams::new(0.7, 0.0).unwrap(), 21).unwrap();
        assert!(zero.odd_coeffs().iter().all(|&c| c == 0.0));
        assert!(selfsim_series(&p, 10).is_err());
    }

    #[test]
    fn series_solves_reduced_chain() {
        let p = QParams::new(0.75, 1.0).unwrap();
        let s = selfsim_series(&p, DEFAULT_SERIES_DEGREE).unwrap();
        let q = 0.75;
        for x in [0.1, 0.3, 0.5, 0.8] {
            let (f, df) = s.eval(x);
            let (fq, dfq) = s.eval(q * x);
            let r = df + q * q * dfq + f * f - q * q * fq * fq - 1.0;
            assert!(r.abs() < 1e-12, "x = {x}: {r:e}");
        }
    }

    #[test]
    fn march_matches_series_inside_radius() {
        let p = QParams::new(0.7, 1.0).unwrap();
        let s = selfsim_series(&p, DEFAULT_SERIES_DEGREE).unwrap();
        let prof = selfsim_extend_from(&s, 0.2, 0.5, 1e-3).unwrap();
        let f = prof.f.real_values().unwrap();
        let g = prof.f.grid();
        let err = g
            .points()
            .zip(&f)
            .map(|(x, v)| (v - s.eval(x).0).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err:e}");
    }

    #[test]
    fn march_residual_to_eight() {
        let p = QParams::new(0.7, 1.0).unwrap();
        let s = selfsim_series(&p, DEFAULT_SERIES_DEGREE).unwrap();
        let prof = selfsim_extend(&s, 8.0, DEFAULT_MARCH_STEP).unwrap();
        assert!(prof.residual < 1e-8, "{:e}", prof.residual);
        let f = prof.f.real_values().unwrap();
        assert!(f.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn march_rejects_bad_input() {
        let p = QParams::new(0.7, 1.0).unwrap();
        let s = selfsim_series(&p, DEFAULT_SERIES_DEGREE).unwrap();
        assert!(selfsim_extend(&s, -1.0, 1e-3).is_err());
        assert!(selfsim_extend_from(&s, 1e-3, 2.0, 1e-3).is_err());
        assert!(QParams::new(1.0, 1.0).is_err());
        assert!(QParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn geometric_spectrum() {
        let p = QParams::new(0.75, 1.0).unwrap();
        let s = selfsim_potential_and_spectrum(&p, 40.0, 8001, 4).unwrap();
        let ratios = s.ratios();
        for r in &ratios[..3] {
            assert!((r / 0.5625 - 1.0).abs() < 0.01, "{ratios:?}");
        }
        let l0 = s.eigenpairs[0].value;
        assert!((l0 / p.lambda0() - 1.0).abs() < 0.01);
        assert!((l0 * (p.q2() - 1.0) / p.mu() - 1.0).abs() < 0.01);
        let u = s.u.real_values().unwrap();
        let n = u.len();
        assert!((0..n).all(|i| (u[i] - u[n - 1 - i]).abs() < 1e-12));
    }

    #[test]
    fn small_q_is_one_soliton() {
        let p = QParams::new(0.05, 1.0).unwrap();
        let s = selfsim_potential_and_spectrum(&p, 12.0, 2401, 1).unwrap();
        let u = s.u.real_values().unwrap();
        let dev = s
            .u
            .grid()
            .points()
            .zip(&u)
            .map(|(x, v)| (v + 2.0 / x.cosh().powi(2)).abs())
            .fold(0.0, f64::max);
        assert!(dev < 0.05, "{dev}");
    }

    #[test]
    fn pantograph_constant_seed() {
        let q = 0.6;
        let alpha = Complex64::new(0.8, 0.0);
        let seed = PiecewisePoly::constant(0.0, 1.0, Complex64::new(1.0, 0.0)).unwrap();
        let ext = pantograph_extend(alpha, q, &seed, 10.0).unwrap();
        let kappa = 1.0 / (q * (1.0 - q * q).sqrt());
        let first = q.powf(1.5) / -alpha * (-kappa);
        assert!((ext.poly.coeffs()[1][0] - first).norm() < 1e-14);
        assert_eq!(ext.poly.degree(), 0);
        assert!(ext.poly.domain().1 >= 10.0);
        assert!(ext.residual < 1e-12, "{:e}", ext.residual);
        assert!(!ext.is_consistent());
        assert!(ext.check_joints().is_err());
    }

    #[test]
    fn pantograph_degree_and_residual() {
        let q = 0.7;
        let alpha = Complex64::new(0.3, -0.4);
        let c = |r: f64| Complex64::new(r, 0.0);
        let seed = PiecewisePoly::new(
            vec![0.0, 0.5, 1.0],
            vec![vec![c(1.0), c(-0.5), c(0.2)], vec![c(0.3), c(0.1), c(0.0), c(0.05)]],
        )
        .unwrap();
        let ext = pantograph_extend(alpha, q, &seed, 6.0).unwrap();
        assert!(ext.poly.degree() <= 3);
        assert!(ext.residual < 1e-10, "{:e}", ext.residual);
        assert_eq!(ext.patch_sup.len(), 1 + ((6.0f64).ln() / (1.0 / q).ln()).ceil() as usize);
    }

    #[test]
    fn piecewise_validation() {
        assert!(PiecewisePoly::new(vec![0.0, 0.0], vec![vec![Complex64::new(1.0, 0.0)]]).is_err());
        assert!(PiecewisePoly::new(vec![0.0, 1.0], vec![]).is_err());
        let p = PiecewisePoly::constant(0.0, 1.0, Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(p.eval(1.0), Some(Complex64::new(2.0, 0.0)));
        assert_eq!(p.eval(1.5), None);
    }
}
