use infeld_core::ortho::{
    christoffel, coeffs_from_measure, geronimus, geronimus_finite, toda_verify, DiscreteMeasure,
};
use proptest::prelude::*;

/// Sorted support with gaps of at least 0.15 and positive weights.
fn measure() -> impl Strategy<Value = DiscreteMeasure> {
    prop::collection::vec((0.15..0.6f64, 0.1..1.0f64), 4..12).prop_map(|v| {
        let mut x = -1.5;
        let (pts, w): (Vec<f64>, Vec<f64>) = v
            .into_iter()
            .map(|(gap, w)| {
                x += gap;
                (x, w)
            })
            .unzip();
        DiscreteMeasure::new(pts, w).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn christoffel_is_a_reweighting(m in measure(), shift in 0.2..1.5f64) {
        let count = m.len().min(7);
        let c = coeffs_from_measure(&m, count).unwrap();
        let lambda = m.min_point() - shift;
        let step = christoffel(&c, lambda).unwrap();
        prop_assert!(step.coeffs.u().iter().all(|&u| u > 0.0));
        let oracle = coeffs_from_measure(&m.reweighted(|x| x - lambda).unwrap(), count - 1).unwrap();
        prop_assert!(step.coeffs.max_abs_diff(&oracle) < 1e-10);
        let f = &step.factors;
        for k in 0..count {
            let b = c.b()[k];
            prop_assert!((b - (f.a[k] + f.c[k] + lambda)).abs() <= 4.0 * f64::EPSILON * (b.abs() + f.c[k].abs() + lambda.abs()));
            if k > 0 {
                prop_assert!((c.u_at(k) - f.a[k] * f.c[k - 1]).abs() <= 2.0 * f64::EPSILON * c.u_at(k));
            }
        }
    }

    #[test]
    fn round_trips(m in measure(), shift in 0.2..1.0f64) {
        let count = m.len().min(6);
        let c = coeffs_from_measure(&m, count).unwrap();
        let lambda = m.min_point() - shift;
        let truncated = c.truncate(count - 1).unwrap();
        let step = christoffel(&c, lambda).unwrap();
        let back = geronimus(&step.coeffs, lambda, step.factors.c[0]).unwrap();
        prop_assert!(back.max_abs_diff(&truncated) < 1e-10);
        let fwd = christoffel(&geronimus_finite(&c, lambda).unwrap(), lambda).unwrap();
        prop_assert!(fwd.coeffs.max_abs_diff(&truncated) < 1e-10);
    }

    #[test]
    fn successive_steps_satisfy_toda(m in measure(), s1 in 0.2..1.0f64, s2 in 0.2..1.0f64) {
        let count = m.len().min(8);
        let c = coeffs_from_measure(&m, count).unwrap();
        let l1 = m.min_point() - s1;
        let a = christoffel(&c, l1).unwrap();
        let b = christoffel(&a.coeffs, l1 - s2).unwrap();
        prop_assert!(toda_verify(&a.factors, &b.factors).unwrap() < 1e-10);
    }
}
