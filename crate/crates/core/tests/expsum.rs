use proptest::prelude::*;
use talbot_core::dd::DoubleDouble;
use talbot_core::dispersion::{DispersionRelation, HighPrecisionTime};
use talbot_core::evolution::SliceSpec;
use talbot_core::expsum::{
    airy_l4_identity_check, block_sum, l4_quadruple_count_naive, l4_quadruple_oracle, BlockSpec, Sign, Weight,
};
use talbot_core::poly::IntPoly;
use talbot_core::Turns;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn folded_grid_matches_direct_sum(theta in 0.0f64..4.0, log_n in 3u32..8, d in 2usize..=3, j in 0usize..4096, recip in any::<bool>()) {
        let weight = if recip { Weight::Reciprocal } else { Weight::Unit };
        let spec = BlockSpec::new(DispersionRelation::monomial(1, d), 1 << log_n, Sign::Plus, weight).unwrap();
        let t = HighPrecisionTime::from_theta(DoubleDouble::from_f64(theta));
        let grid = spec.terms(&SliceSpec::Horizontal { t }).unwrap().eval_grid(4096);
        let direct = block_sum(&spec, &t, Turns::from_ratio(j as i128, 4096)).unwrap();
        prop_assert!((grid[j] - direct).norm() < 1e-9 * (1u64 << log_n) as f64);
    }

    #[test]
    fn quadruple_oracle_matches_brute_force(k in 1i64..4, l in 1i64..6, d in 2usize..=3, big_k in 2u64..14) {
        let h = IntPoly::new(vec![0, l]).combine(1, &IntPoly::monomial(1, d), -k);
        let fast = l4_quadruple_oracle(&h, big_k).unwrap();
        prop_assert_eq!(fast.count, l4_quadruple_count_naive(&h, big_k).unwrap());
        for q in &fast.quadruples {
            prop_assert_eq!(h.eval_checked(q[0] as i128).unwrap() + h.eval_checked(q[2] as i128).unwrap(),
                h.eval_checked(q[1] as i128).unwrap() + h.eval_checked(q[3] as i128).unwrap());
        }
    }
}

#[test]
fn airy_identity_at_small_blocks() {
    let t = HighPrecisionTime::from_theta(DoubleDouble::SQRT2);
    for n in [32u64, 64] {
        let check = airy_l4_identity_check(&t, n, 1 << 12).unwrap();
        assert!(check.relative_error < 1e-8, "N = {n}: {}", check.relative_error);
    }
}
