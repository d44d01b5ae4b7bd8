use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use infeld_core::coherent::{coherent_fock, CoherentSpec, Flavor};
use infeld_core::oscillator::{evolution_op, FockVector};
use infeld_core::Complex64;
use proptest::prelude::*;

const M: usize = 70;

fn fock(alpha: Complex64, flavor: Flavor) -> FockVector {
    coherent_fock(&CoherentSpec::new(alpha, flavor).unwrap().with_truncation(M).unwrap()).unwrap()
}

fn alpha() -> impl Strategy<Value = Complex64> {
    (0.0..2.0f64, -3.2..3.2f64).prop_map(|(r, a)| Complex64::from_polar(r, a))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_flavor_is_normalized(a in alpha(), phi in -3.0..3.0f64) {
        for f in [Flavor::Canonical, Flavor::Parity, Flavor::FourierPlus, Flavor::FourierMinus] {
            let v = coherent_fock(&CoherentSpec::new(a, f).unwrap()).unwrap();
            prop_assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        let tg = coherent_fock(&CoherentSpec::titulaer_glauber(a, phi).unwrap()).unwrap();
        prop_assert!((tg.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cats_decompose_into_canonical_states(a in alpha()) {
        let rot = |k: f64| Complex64::from_polar(1.0, k * FRAC_PI_4);
        let canon = |z: Complex64| fock(z * a, Flavor::Canonical);
        let pcs = canon(rot(2.0))
            .scale(rot(-1.0))
            .add(&canon(rot(-2.0)).scale(rot(1.0)))
            .scale(Complex64::new(FRAC_1_SQRT_2, 0.0));
        prop_assert!(fock(a, Flavor::Parity).max_abs_diff(&pcs) < 1e-10);
        let w = rot(1.0);
        let four = canon(rot(1.0))
            .add(&canon(rot(3.0)).scale(-w))
            .add(&canon(rot(5.0)))
            .add(&canon(rot(7.0)).scale(w))
            .scale(Complex64::new(0.5, 0.0));
        prop_assert!(fock(a, Flavor::FourierPlus).max_abs_diff(&four) < 1e-10);
    }

    #[test]
    fn evolution_rotates_the_amplitude(a in alpha(), phi in -3.0..3.0f64, t in -6.0..6.0f64) {
        let tg = |z: Complex64| {
            coherent_fock(&CoherentSpec::titulaer_glauber(z, phi).unwrap().with_truncation(M).unwrap()).unwrap()
        };
        let lhs = evolution_op(M, t).unwrap().apply(&tg(a));
        let rhs = tg(Complex64::from_polar(1.0, -t) * a).scale(Complex64::from_polar(1.0, -t / 2.0));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }
}
