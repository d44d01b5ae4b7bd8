//! Monic orthogonal polynomials, Christoffel and Geronimus transforms as
//! shifted LU/UL factorizations of the Jacobi matrix, and the discrete-time
//! Toda relations between successive factorizations.
//!
//! Recurrence: `p_{n+1} + uₙp_{n−1} + bₙpₙ = xpₙ`, `p₋₁ = 0`, `p₀ = 1`.

use crate::error::{Error, Result};

/// Relative pivot magnitude treated as zero.
const PIVOT_EPS: f64 = 1e-14;

/// `b₀…b_{N−1}` and `u₁…u_{N−1}` of an `N`-term recurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs {
    b: Vec<f64>,
    u: Vec<f64>,
}

impl RecurrenceCoeffs {
    /// `u[n−1]` holds `uₙ`; requires `u.len() + 1 == b.len()` and `uₙ > 0`.
    pub fn new(b: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if b.is_empty() || u.len() + 1 != b.len() {
            return Err(Error::invalid(format!(
                "need N ≥ 1 diagonal and N − 1 off-diagonal coefficients, got {} and {}",
                b.len(),
                u.len()
            )));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("diagonal coefficients must be finite"));
        }
        if let Some(n) = u.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(format!(
                "u_{} = {} violates positivity",
                n + 1,
                u[n]
            )));
        }
        Ok(Self { b, u })
    }

    /// Monic Hermite polynomials for the weight `e^{−x²}`: `bₙ = 0`, `uₙ = n/2`.
    pub fn hermite(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n], (1..n).map(|k| 0.5 * k as f64).collect())
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `u₁…u_{N−1}`.
    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// `uₙ` for `1 ≤ n < N`.
    pub fn u_at(&self, n: usize) -> f64 {
        self.u[n - 1]
    }

    /// Leading `n` terms.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::invalid(format!("cannot truncate length {} to {n}", self.len())));
        }
        Self::new(self.b[..n].to_vec(), self.u[..n - 1].to_vec())
    }

    /// Max-norm distance over the common leading terms.
    pub fn max_abs_diff(&self, other: &RecurrenceCoeffs) -> f64 {
        let db = self.b.iter().zip(&other.b).map(|(a, b)| (a - b).abs());
        let du = self.u.iter().zip(&other.u).map(|(a, b)| (a - b).abs());
        db.chain(du).fold(0.0, f64::max)
    }

    /// Eigenvalues of the symmetric `N×N` Jacobi matrix, ascending.
    pub fn jacobi_eigenvalues(&self) -> Vec<f64> {
        let off: Vec<f64> = self.u.iter().map(|v| v.sqrt()).collect();
        crate::numerics::eigen::tridiagonal_eigenvalues(&self.b, &off, self.len())
    }
}

/// Support points and positive weights of a finite measure.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::invalid("need matching nonempty points and weights"));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("support points must be finite"));
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::invalid("weights must be positive and finite"));
        }
        let mut sorted = points.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("support points must be distinct"));
        }
        Ok(Self { points, weights })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `w(x) ↦ w(x)·g(x)`; every new weight must stay positive.
    pub fn reweighted(&self, g: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(
            self.points.clone(),
            self.points
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| w * g(x))
                .collect(),
        )
    }

    pub fn min_point(&self) -> f64 {
        self.points.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Stieltjes procedure: `bₙ = ⟨xpₙ,pₙ⟩/‖pₙ‖²`, `uₙ = ‖pₙ‖²/‖pₙ₋₁‖²`.
pub fn coeffs_from_measure(m: &DiscreteMeasure, count: usize) -> Result<RecurrenceCoeffs> {
    if count == 0 || count > m.len() {
        return Err(Error::invalid(format!(
            "count must lie in 1..={}, got {count}",
            m.len()
        )));
    }
    let k = m.len();
    let mut prev = vec![0.0; k];
    let mut cur = vec![1.0; k];
    let norm0: f64 = m.weights.iter().sum();
    let mut norm_prev = 0.0;
    let mut b = Vec::with_capacity(count);
    let mut u = Vec::with_capacity(count.saturating_sub(1));
    for n in 0..count {
        let norm: f64 = m.weights.iter().zip(&cur).map(|(w, p)| w * p * p).sum();
        if !(norm > PIVOT_EPS * norm0) {
            return Err(Error::Numeric(format!(
                "Stieltjes procedure lost positivity at degree {n} (‖pₙ‖² = {norm:e})"
            )));
        }
        let xn: f64 = m
            .weights
            .iter()
            .zip(&cur)
            .zip(&m.points)
            .map(|((w, p), x)| w * x * p * p)
            .sum();
        let bn = xn / norm;
        b.push(bn);
        let un = if n > 0 { norm / norm_prev } else { 0.0 };
        if n > 0 {
            u.push(un);
        }
        let next: Vec<f64> = (0..k)
            .map(|i| (m.points[i] - bn) * cur[i] - un * prev[i])
            .collect();
        prev = std::mem::replace(&mut cur, next);
        norm_prev = norm;
    }
    RecurrenceCoeffs::new(b, u)
}

/// `p₀(x)…p_N(x)` by the forward recurrence.
pub fn poly_eval(c: &RecurrenceCoeffs, x: f64) -> Vec<f64> {
    let n = c.len();
    let mut p = Vec::with_capacity(n + 1);
    p.push(1.0);
    p.push(x - c.b[0]);
    for k in 1..n {
        let next = (x - c.b[k]) * p[k] - c.u_at(k) * p[k - 1];
        p.push(next);
    }
    p
}

/// Bidiagonal factors of `J − λ` with `a[0] = 0` as a placeholder for `A₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// `A₀ = 0, A₁, …`
    pub a: Vec<f64>,
    /// `C₀, C₁, …`
    pub c: Vec<f64>,
    pub lambda: f64,
}

impl Factorization {
    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}

/// Output of [`christoffel`]: the kernel-polynomial coefficients and the LU
/// factors they are read from.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelStep {
    pub coeffs: RecurrenceCoeffs,
    pub factors: Factorization,
}

fn check_pivot(v: f64, scale: f64, row: usize, lambda: f64) -> Result<()> {
    if !(v.abs() > PIVOT_EPS * scale) || !v.is_finite() {
        return Err(Error::ZeroPivot { row, shift: lambda });
    }
    Ok(())
}

fn scale_of(c: &RecurrenceCoeffs, lambda: f64) -> f64 {
    c.b.iter()
        .chain(&c.u)
        .map(|v| v.abs())
        .fold(lambda.abs(), f64::max)
        .max(1.0)
}

/// `J − λ = LU`, `J' = UL + λ`:
/// `C₀ = b₀ − λ`, `Aₙ = uₙ/Cₙ₋₁`, `Cₙ = bₙ − λ − Aₙ`;
/// `u'ₙ = AₙCₙ`, `b'ₙ = Aₙ₊₁ + Cₙ + λ`. The last row is dropped, so the
/// result has `N − 1` terms.
pub fn christoffel(c: &RecurrenceCoeffs, lambda: f64) -> Result<ChristoffelStep> {
    let n = c.len();
    if n < 2 {
        return Err(Error::invalid("Christoffel step needs N ≥ 2"));
    }
    if !lambda.is_finite() {
        return Err(Error::invalid("λ must be finite"));
    }
    let scale = scale_of(c, lambda);
    let mut a = vec![0.0; n];
    let mut cc = vec![0.0; n];
    cc[0] = c.b[0] - lambda;
    check_pivot(cc[0], scale, 0, lambda)?;
    for k in 1..n {
        a[k] = c.u_at(k) / cc[k - 1];
        cc[k] = c.b[k] - lambda - a[k];
        check_pivot(cc[k], scale, k, lambda)?;
    }
    let b_new: Vec<f64> = (0..n - 1).map(|k| a[k + 1] + cc[k] + lambda).collect();
    let u_new: Vec<f64> = (1..n - 1).map(|k| a[k] * cc[k]).collect();
    let coeffs = RecurrenceCoeffs::new(b_new, u_new).map_err(|e| {
        Error::Numeric(format!("Christoffel step at λ = {lambda} left the positive class: {e}"))
    })?;
    Ok(ChristoffelStep {
        coeffs,
        factors: Factorization {
            a,
            c: cc,
            lambda,
        },
    })
}

fn ul_product(a: &[f64], cc: &[f64], lambda: f64) -> Result<RecurrenceCoeffs> {
    let n = cc.len();
    let b_new: Vec<f64> = (0..n).map(|k| a[k] + cc[k] + lambda).collect();
    let u_new: Vec<f64> = (1..n).map(|k| a[k] * cc[k - 1]).collect();
    RecurrenceCoeffs::new(b_new, u_new).map_err(|e| {
        Error::Numeric(format!("Geronimus step at λ = {lambda} left the positive class: {e}"))
    })
}

/// `J − λ = UL` seeded by `C₀ = t`, `J' = LU + λ`:
/// `Aₙ₊₁ = bₙ − λ − Cₙ`, `Cₙ = uₙ/Aₙ`; `b'ₙ = Aₙ + Cₙ + λ`, `u'ₙ = AₙCₙ₋₁`.
///
/// The forward recursion amplifies rounding by roughly `|λ|²/uₙ` per row when
/// `|λ|` dominates the coefficients.
pub fn geronimus(c: &RecurrenceCoeffs, lambda: f64, t: f64) -> Result<RecurrenceCoeffs> {
    if !lambda.is_finite() || !t.is_finite() {
        return Err(Error::invalid("λ and t must be finite"));
    }
    let n = c.len();
    let scale = scale_of(c, lambda).max(t.abs());
    let mut a = vec![0.0; n];
    let mut cc = vec![0.0; n];
    cc[0] = t;
    for k in 1..n {
        a[k] = c.b[k - 1] - lambda - cc[k - 1];
        check_pivot(a[k], scale, k, lambda)?;
        cc[k] = c.u_at(k) / a[k];
    }
    ul_product(&a, &cc, lambda)
}

/// UL factorization of the finite `N×N` block, `A_N = 0`, computed upward
/// from the last row. Equals [`geronimus`] with `t` = [`resolvent_t`].
pub fn geronimus_finite(c: &RecurrenceCoeffs, lambda: f64) -> Result<RecurrenceCoeffs> {
    if !lambda.is_finite() {
        return Err(Error::invalid("λ must be finite"));
    }
    let n = c.len();
    let scale = scale_of(c, lambda);
    let mut a = vec![0.0; n];
    let mut cc = vec![0.0; n];
    let mut a_next = 0.0;
    for k in (0..n).rev() {
        cc[k] = c.b[k] - lambda - a_next;
        check_pivot(cc[k], scale, k, lambda)?;
        if k > 0 {
            a[k] = c.u_at(k) / cc[k];
            a_next = a[k];
        }
    }
    ul_product(&a, &cc, lambda)
}

/// `1/[(J − λ)⁻¹]₀₀` of the `N×N` truncation, by the continued fraction.
pub fn resolvent_t(c: &RecurrenceCoeffs, lambda: f64) -> Result<f64> {
    let n = c.len();
    let scale = scale_of(c, lambda);
    let mut tail = 0.0;
    for k in (0..n).rev() {
        let d = c.b[k] - lambda - tail;
        check_pivot(d, scale, k, lambda)?;
        if k == 0 {
            return Ok(d);
        }
        tail = c.u_at(k) / d;
    }
    unreachable!("loop returns at k = 0")
}

/// Max residual of `A^{j+1}ₙC^{j+1}ₙ₋₁ = AʲₙCʲₙ` and
/// `A^{j+1}ₙ + C^{j+1}ₙ + λ_{j+1} = Aʲₙ₊₁ + Cʲₙ + λⱼ` over all available `n`.
///
/// `level_j1` must come from a Christoffel step applied to the output of the
/// step that produced `level_j`, so it is one row shorter.
pub fn toda_verify(level_j: &Factorization, level_j1: &Factorization) -> Result<f64> {
    let n = level_j.len();
    if level_j.a.len() != n || level_j1.a.len() != level_j1.len() || level_j1.len() + 1 != n {
        return Err(Error::invalid(format!(
            "successive factorizations need lengths N and N − 1, got {} and {}",
            n,
            level_j1.len()
        )));
    }
    let (aj, cj, lj) = (&level_j.a, &level_j.c, level_j.lambda);
    let (ak, ck, lk) = (&level_j1.a, &level_j1.c, level_j1.lambda);
    let m = level_j1.len();
    let mut r: f64 = 0.0;
    for k in 1..m {
        r = r.max((ak[k] * ck[k - 1] - aj[k] * cj[k]).abs());
    }
    for k in 0..m {
        r = r.max((ak[k] + ck[k] + lk - aj[k + 1] - cj[k] - lj).abs());
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_point() -> DiscreteMeasure {
        DiscreteMeasure::new(vec![-1.0, 0.0, 1.0], vec![1.0; 3]).unwrap()
    }

    fn sample_measure() -> DiscreteMeasure {
        let pts: Vec<f64> = (0..12).map(|i| -1.0 + 2.0 * i as f64 / 11.0 + 0.01 * (i as f64).sin()).collect();
        let w: Vec<f64> = (0..12).map(|i| 0.5 + 0.3 * (i as f64 * 0.7).cos().abs()).collect();
        DiscreteMeasure::new(pts, w).unwrap()
    }

    #[test]
    fn three_point_recurrence() {
        let c = coeffs_from_measure(&three_point(), 3).unwrap();
        assert!(c.b().iter().all(|b| b.abs() < 1e-15));
        assert!((c.u_at(1) - 2.0 / 3.0).abs() < 1e-15);
        assert!((c.u_at(2) - 1.0 / 3.0).abs() < 1e-15);
        let p = poly_eval(&c, 0.0);
        assert!((p[2] + 2.0 / 3.0).abs() < 1e-15);
        let m = three_point();
        let s: f64 = m
            .points()
            .iter()
            .zip(m.weights())
            .map(|(&x, w)| {
                let p = poly_eval(&c, x);
                w * p[2] * p[1]
            })
            .sum();
        assert!(s.abs() < 1e-12);
    }

    #[test]
    fn first_polynomial() {
        let c = RecurrenceCoeffs::new(vec![0.3, -0.2], vec![0.7]).unwrap();
        assert_eq!(poly_eval(&c, 1.5)[1], 1.5 - 0.3);
        assert_eq!(poly_eval(&c, 1.5).len(), 3);
    }

    #[test]
    fn gaussian_weight_gives_hermite() {
        let h = 0.05;
        let pts: Vec<f64> = (0..=400).map(|i| -10.0 + i as f64 * h).collect();
        let w: Vec<f64> = pts.iter().map(|x| h * (-x * x).exp()).collect();
        let c = coeffs_from_measure(&DiscreteMeasure::new(pts, w).unwrap(), 10).unwrap();
        for n in 1..10 {
            assert!((c.u_at(n) - 0.5 * n as f64).abs() < 1e-8, "u_{n} = {}", c.u_at(n));
        }
        assert!(c.b().iter().all(|b| b.abs() < 1e-8));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RecurrenceCoeffs::new(vec![0.0, 0.0], vec![-1.0]).is_err());
        assert!(RecurrenceCoeffs::new(vec![0.0, 0.0], vec![]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(DiscreteMeasure::new(vec![0.0], vec![0.0]).is_err());
        assert!(coeffs_from_measure(&three_point(), 4).is_err());
    }

    #[test]
    fn christoffel_matches_reweighted_measure() {
        let m = sample_measure();
        let lambda = -1.7;
        let c = coeffs_from_measure(&m, 9).unwrap();
        let step = christoffel(&c, lambda).unwrap();
        assert!((step.factors.c[0] - (c.b()[0] - lambda)).abs() < 1e-15);
        let oracle = coeffs_from_measure(&m.reweighted(|x| x - lambda).unwrap(), 8).unwrap();
        assert!(step.coeffs.max_abs_diff(&oracle) < 1e-10);
        for k in 1..c.len() {
            let f = &step.factors;
            assert!((c.u_at(k) - f.a[k] * f.c[k - 1]).abs() < 1e-15);
            assert!((c.b()[k] - (f.a[k] + f.c[k] + lambda)).abs() < 1e-14);
        }
    }

    #[test]
    fn christoffel_divisibility() {
        let c = RecurrenceCoeffs::hermite(8).unwrap();
        let lambda = -4.0;
        let step = christoffel(&c, lambda).unwrap();
        let p = poly_eval(&c, lambda);
        for k in 0..8 {
            assert!((step.factors.c[k] + p[k + 1] / p[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn christoffel_keeps_positivity() {
        let c = RecurrenceCoeffs::hermite(12).unwrap();
        let step = christoffel(&c, -10.0).unwrap();
        assert!(step.coeffs.u().iter().all(|&u| u > 0.0));
        assert_eq!(step.coeffs.len(), 11);
    }

    #[test]
    fn christoffel_zero_pivot() {
        let c = RecurrenceCoeffs::new(vec![1.0, 0.0], vec![1.0]).unwrap();
        assert!(matches!(christoffel(&c, 1.0), Err(Error::ZeroPivot { row: 0, .. })));
    }

    #[test]
    fn eigenvalues_interlace_after_christoffel() {
        let c = coeffs_from_measure(&sample_measure(), 8).unwrap();
        let step = christoffel(&c, -1.5).unwrap();
        let before = c.jacobi_eigenvalues();
        let after = step.coeffs.jacobi_eigenvalues();
        for k in 0..after.len() {
            assert!(before[k] < after[k] && after[k] < before[k + 1]);
        }
    }

    #[test]
    fn round_trips() {
        let c = coeffs_from_measure(&sample_measure(), 7).unwrap();
        let lambda = -1.4;
        let step = christoffel(&c, lambda).unwrap();
        let back = geronimus(&step.coeffs, lambda, step.factors.c[0]).unwrap();
        assert!(back.max_abs_diff(&c.truncate(6).unwrap()) < 1e-10);

        let g = geronimus_finite(&c, lambda).unwrap();
        let fwd = christoffel(&g, lambda).unwrap();
        assert!(fwd.coeffs.max_abs_diff(&c.truncate(6).unwrap()) < 1e-10);
    }

    #[test]
    fn geronimus_family_and_resolvent() {
        let c = coeffs_from_measure(&sample_measure(), 6).unwrap();
        let lambda = -1.3;
        let t = resolvent_t(&c, lambda).unwrap();
        let g1 = geronimus(&c, lambda, t).unwrap();
        let g2 = geronimus(&c, lambda, 0.9 * t).unwrap();
        assert!((g1.b()[0] - g2.b()[0]).abs() > 1e-3);
        let fin = geronimus_finite(&c, lambda).unwrap();
        assert!(g1.max_abs_diff(&fin) < 1e-9);
    }

    #[test]
    fn geronimus_approaches_identity() {
        let c = RecurrenceCoeffs::new(vec![0.2, -0.1, 0.3, 0.0, 0.1], vec![0.5, 0.8, 0.6, 0.9]).unwrap();
        let dev: Vec<f64> = [-20.0, -40.0, -80.0]
            .iter()
            .map(|&l| geronimus_finite(&c, l).unwrap().truncate(3).unwrap().max_abs_diff(&c))
            .collect();
        assert!(dev[1] < 0.6 * dev[0] && dev[2] < 0.6 * dev[1], "{dev:?}");
        assert!(dev[2] * 80.0 < 2.0);
    }

    #[test]
    fn toda_lattice_relations() {
        let c = coeffs_from_measure(&sample_measure(), 10).unwrap();
        let s1 = christoffel(&c, -1.6).unwrap();
        let s2 = christoffel(&s1.coeffs, -1.2).unwrap();
        assert!(toda_verify(&s1.factors, &s2.factors).unwrap() < 1e-10);

        let mut bad = s1.factors.clone();
        bad.c[3] += 1e-2;
        assert!(toda_verify(&bad, &s2.factors).unwrap() > 1e-3);
        assert!(toda_verify(&s2.factors, &s1.factors).is_err());
    }

    #[test]
    fn isospectral_rhombus_rules() {
        let c = coeffs_from_measure(&sample_measure(), 10).unwrap();
        let lambda = -1.5;
        let s1 = christoffel(&c, lambda).unwrap();
        let s2 = christoffel(&s1.coeffs, lambda).unwrap();
        let (a1, c1, a2, c2) = (&s1.factors.a, &s1.factors.c, &s2.factors.a, &s2.factors.c);
        for n in 1..s2.factors.len() {
            assert!((a2[n] * c2[n - 1] - a1[n] * c1[n]).abs() < 1e-12);
            assert!((a2[n] + c2[n] - a1[n + 1] - c1[n]).abs() < 1e-12);
        }
        assert!(toda_verify(&s1.factors, &s2.factors).unwrap() < 1e-12);
    }
}
