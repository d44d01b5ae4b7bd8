use infeld_core::numerics::diff::second_derivative;
use infeld_core::numerics::grid::interior_max;
use infeld_core::numerics::Grid;
use infeld_core::oscillator::{fourier_op, hermite_psi, ladder_ops, FockOperator};
use infeld_core::qalgebra::{q_factorial, q_number, q_oscillator_matrices, QParams};
use infeld_core::Complex64;
use proptest::prelude::*;

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn heisenberg_and_factorization(m in 2usize..80) {
        let l = ladder_ops(m).unwrap();
        let id = FockOperator::identity(m);
        let comm = (&l.a * &l.a_dag).sub(&(&l.a_dag * &l.a));
        prop_assert!(comm.max_abs_diff_block(&id, m - 1) < 1e-13);
        let fact = (&l.a_dag * &l.a).add(&id.scale(re(0.5)));
        prop_assert!(fact.max_abs_diff_block(&l.l, m) < 1e-13);
        for sign in [1, -1] {
            let f = fourier_op(m, sign).unwrap();
            let c = (&l.l * &f).sub(&(&f * &l.l));
            prop_assert!(c.max_abs_diff_block(&FockOperator::identity(m).scale(re(0.0)), m) == 0.0);
        }
    }

    #[test]
    fn q_oscillator_identity(q in 0.05..0.99f64, m in 2usize..80) {
        let (a, ad) = q_oscillator_matrices(&QParams::oscillator(q).unwrap(), m).unwrap();
        let lhs = (&a * &ad).sub(&(&ad * &a).scale(re(q * q)));
        prop_assert!(lhs.max_abs_diff_block(&FockOperator::identity(m), m - 1) < 1e-13);
    }

    #[test]
    fn q_number_recurrence(n in 0usize..40, q2 in 0.0..0.999f64) {
        let next = q_number(n + 1, q2).unwrap();
        prop_assert!((next - (1.0 + q2 * q_number(n, q2).unwrap())).abs() < 1e-12 * next.max(1.0));
        let f = q_factorial(n + 1, q2).unwrap();
        prop_assert!((f - next * q_factorial(n, q2).unwrap()).abs() <= 1e-12 * f);
    }
}

#[test]
fn q_number_limits() {
    for n in 1..30 {
        assert_eq!(q_number(n, 0.0).unwrap(), 1.0);
        let near = q_number(n, 1.0 - 1e-9).unwrap();
        assert!((near - n as f64).abs() < 1e-5 * (n * n) as f64, "[{n}] = {near}");
    }
    assert_eq!(q_number(0, 0.5).unwrap(), 0.0);
    assert!(q_number(3, 1.0).is_err());
}

#[test]
fn hermite_functions_solve_the_oscillator() {
    let g = Grid::symmetric(10.0, 4001).unwrap();
    let h = g.spacing();
    for n in 0..=10 {
        let psi = hermite_psi(n, g).unwrap();
        let d2 = second_derivative(psi.values(), h);
        let r: Vec<f64> = g
            .points()
            .zip(psi.values().iter().zip(&d2))
            .map(|(x, (v, dd))| (0.5 * (-dd + x * x * v) - (n as f64 + 0.5) * v).norm())
            .collect();
        assert!(interior_max(&r, 2) < 1e-6, "n = {n}");
    }
}
