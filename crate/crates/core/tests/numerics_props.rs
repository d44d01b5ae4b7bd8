use std::f64::consts::PI;

use infeld_core::numerics::{fd_eigen, theta1, theta4, ExpSum, Grid, GridFunction, ThetaNome};
use infeld_core::Complex64;
use proptest::prelude::*;

fn expsum() -> impl Strategy<Value = ExpSum> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64, -1.5..1.5f64, -1.0..1.0f64), 1..4).prop_map(|t| {
        ExpSum::from_terms(
            t.into_iter()
                .map(|(cr, ci, rr, ri)| (Complex64::new(cr, ci), Complex64::new(rr, ri))),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_matches_central_difference(s in expsum(), x in -2.0..2.0f64) {
        let h = 1e-3;
        let fd = (s.eval(x + h) - s.eval(x - h)) / (2.0 * h);
        let exact = s.derivative(1).eval(x);
        let scale = s.terms().iter().map(|t| t.coeff.norm() * (t.rate.re * x).exp()).sum::<f64>();
        prop_assert!((fd - exact).norm() <= 1e-5 * scale.max(1.0));
    }

    #[test]
    fn second_derivative_composes(s in expsum(), x in -2.0..2.0f64) {
        let once = s.derivative(1).derivative(1).eval(x);
        let twice = s.derivative(2).eval(x);
        prop_assert!((once - twice).norm() <= 1e-12 * (1.0 + twice.norm()));
    }

    #[test]
    fn wronskian_alternates(a in expsum(), b in expsum(), c in expsum(), x in -1.0..1.0f64) {
        let w = ExpSum::wronskian(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let swapped = ExpSum::wronskian(&[b, a, c]).unwrap();
        let magnitude = w.terms().iter().map(|t| t.coeff.norm() * (t.rate.re * x).exp()).sum::<f64>();
        prop_assert!((w.eval(x) + swapped.eval(x)).norm() <= 1e-10 * magnitude.max(1.0));
    }

    #[test]
    fn theta_identities(nu in -10.0..10.0f64, p in 0.0..0.95f64) {
        let nome = ThetaNome::new(p).unwrap();
        prop_assert_eq!(theta1(0.0, nome), 0.0);
        prop_assert!((theta4(nu, nome) - theta4(-nu, nome)).abs() < 1e-13);
        prop_assert!((theta1(nu, nome) + theta1(-nu, nome)).abs() < 1e-13);
        let scale = 1.0 + theta4(0.0, nome).abs();
        prop_assert!((theta4(nu + 2.0 * PI, nome) - theta4(nu, nome)).abs() < 1e-13 * scale);
        prop_assert!((theta1(nu + 2.0 * PI, nome) - theta1(nu, nome)).abs() < 1e-12 * scale);
    }
}

#[test]
fn eigenvalues_converge_quadratically() {
    // harmonic oscillator −ψ'' + x²ψ: levels 2n + 1
    let err = |n: usize| {
        let g = Grid::symmetric(10.0, n).unwrap();
        let u = GridFunction::from_real_fn(g, |x| x * x);
        let e = fd_eigen(&u, 3).unwrap();
        e.iter().enumerate().map(|(k, p)| (p.value - (2 * k + 1) as f64).abs()).fold(0.0, f64::max)
    };
    let (coarse, fine) = (err(401), err(801));
    let order = (coarse / fine).log2();
    assert!((1.8..2.2).contains(&order), "observed order {order}");
}
