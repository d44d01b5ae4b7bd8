use infeld_core::darboux::{chain_f, chain_residual, crum_potential, ChainState, TauFunction};
use infeld_core::numerics::{ExpSum, Grid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn soliton_chain_closes(k1 in 0.3..1.0f64, gap in 0.3..1.5f64, s0 in -2.0..2.0f64, s1 in -2.0..2.0f64) {
        let k2 = k1 + gap;
        let seeds = [ExpSum::cosh(0.5 * k1, s0), ExpSum::sinh(0.5 * k2, s1)];
        let taus = [
            TauFunction::new(ExpSum::constant(1.0)),
            TauFunction::new(seeds[0].clone()),
            TauFunction::new(ExpSum::wronskian(&seeds).unwrap()),
        ];
        let (l0, l1) = (-0.25 * k1 * k1, -0.25 * k2 * k2);
        let g = Grid::symmetric(20.0, 8001).unwrap();
        let st0 = ChainState::new(taus[0].clone(), taus[1].clone(), l0);
        let st1 = ChainState::new(taus[1].clone(), taus[2].clone(), l1);
        let f0 = chain_f(&st0, g).unwrap();
        let f1 = chain_f(&st1, g).unwrap();
        prop_assert!(chain_residual(&f0, &f1, l1 - l0).unwrap() < 1e-8);
        let u1 = crum_potential(&seeds[..1], 0.0).unwrap();
        for x in g.points() {
            prop_assert!((st0.upper_potential(x) - st1.lower_potential(x)).norm() < 1e-8);
            prop_assert!((st0.upper_potential(x) - u1.eval(x)).norm() < 1e-8);
        }
    }
}
