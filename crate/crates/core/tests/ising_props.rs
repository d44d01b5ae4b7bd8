use infeld_core::ising::magnetization_thermo;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn magnetization_is_odd(q in 0.0..0.9f64, h in 0.0..4.0f64) {
        let plus = magnetization_thermo(q, h).unwrap();
        let minus = magnetization_thermo(q, -h).unwrap();
        prop_assert!((plus + minus).abs() < 1e-12);
    }

    #[test]
    fn magnetization_is_bounded_by_free_spin(q in 0.0..0.9f64, h in 0.0..4.0f64) {
        let m = magnetization_thermo(q, h).unwrap();
        prop_assert!(m >= -1e-12 && m <= h.tanh() + 1e-12, "m = {m}");
    }
}

#[test]
fn magnetization_saturates() {
    let m: Vec<f64> = [0.5, 1.0, 2.0, 3.0, 5.0]
        .iter()
        .map(|&h| magnetization_thermo(0.5, h).unwrap())
        .collect();
    assert!(m.windows(2).all(|w| w[1] > w[0]));
    assert!(m[4] > 0.99);
}
