use num_complex::Complex64;
use proptest::prelude::*;
use talbot_core::initial_data::{Breakpoint, CoefficientSource, StepFunction};

const DEN: i128 = 64;

fn step_function() -> impl Strategy<Value = StepFunction> {
    (proptest::collection::btree_set(0..DEN, 1..8), proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 8))
        .prop_map(|(points, vals)| {
            let bps: Vec<Breakpoint> = points.iter().map(|&p| Breakpoint::rational(p, DEN).unwrap()).collect();
            let values = vals[..bps.len()].iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            StepFunction::new(bps, values).unwrap()
        })
}

proptest! {
    #[test]
    fn coefficient_decay_bound(g in step_function(), n in 1i128..100_000) {
        let bound = g.total_variation() / (2.0 * std::f64::consts::PI * n as f64);
        prop_assert!(g.coefficient(n).norm() <= bound * (1.0 + 1e-12) + 1e-15);
        prop_assert!(g.coefficient(-n).norm() <= bound * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn parseval_with_tail_bound(g in step_function()) {
        let m = 2048;
        let partial: f64 = g.truncated(m).iter().map(|c| c.norm_sqr()).sum();
        let tv = g.total_variation();
        let tail = tv * tv / (std::f64::consts::PI * m as f64);
        let full = g.l2_norm_sq();
        let two_pi = 2.0 * std::f64::consts::PI;
        prop_assert!(two_pi * partial <= full * (1.0 + 1e-12) + 1e-12);
        prop_assert!(full - two_pi * partial <= tail + 1e-12);
    }

    #[test]
    fn mean_is_zeroth_coefficient(g in step_function()) {
        prop_assert!((g.mean() - g.coefficient(0)).norm() < 1e-14);
    }

    #[test]
    fn translation_multiplies_by_character(g in step_function(), m in 0i128..16, n in -500i128..500) {
        let mut w = vec![Complex64::new(0.0, 0.0); 16];
        w[m as usize] = Complex64::new(1.0, 0.0);
        let shifted = g.translate_combination(16, &w).unwrap();
        let phase = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (n * m) as f64 / 16.0);
        prop_assert!((shifted.coefficient(n) - g.coefficient(n) * phase).norm() < 1e-12);
    }
}
