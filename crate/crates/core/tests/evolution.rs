use num_complex::Complex64;
use proptest::prelude::*;
use talbot_core::dd::DoubleDouble;
use talbot_core::dispersion::{DispersionRelation, HighPrecisionTime};
use talbot_core::evolution::{evolve_slice, truncated_modes, SliceSpec};
use talbot_core::fractal::besov_profile;
use talbot_core::initial_data::{Breakpoint, StepFunction};

fn datum(points: &[i128], vals: &[f64]) -> StepFunction {
    let bps = points.iter().map(|&p| Breakpoint::rational(p, 32).unwrap()).collect();
    StepFunction::new(bps, vals[..points.len()].iter().map(|&v| Complex64::new(v, 0.5 * v)).collect()).unwrap()
}

fn arb_datum() -> impl Strategy<Value = StepFunction> {
    (proptest::collection::btree_set(0i128..32, 2..6), proptest::collection::vec(-2.0f64..2.0, 6))
        .prop_map(|(p, v)| datum(&p.into_iter().collect::<Vec<_>>(), &v))
}

fn horizontal(theta: f64) -> SliceSpec {
    SliceSpec::Horizontal {
        t: HighPrecisionTime::from_theta(DoubleDouble::from_f64(theta)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn grid_l2_equals_coefficient_l2(g in arb_datum(), theta in 0.0f64..5.0, d in 2usize..=3) {
        let rel = DispersionRelation::monomial(1, d);
        let m = 256;
        let grid = evolve_slice(&rel, &g, "g", &horizontal(theta), m, 1024).unwrap();
        let sampled: f64 = grid.samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / 1024.0;
        let coeffs: f64 = truncated_modes(&g, m).iter().map(|c| c.1.norm_sqr()).sum();
        prop_assert!((sampled - coeffs).abs() < 1e-12 * coeffs.max(1.0));
    }

    #[test]
    fn translation_covariance(g in arb_datum(), theta in 0.0f64..5.0, shift in 0usize..16) {
        let rel = DispersionRelation::monomial(-1, 2);
        let len = 1024;
        let mut w = vec![Complex64::new(0.0, 0.0); 16];
        w[shift] = Complex64::new(1.0, 0.0);
        let moved = g.translate_combination(16, &w).unwrap();
        let a = evolve_slice(&rel, &g, "g", &horizontal(theta), 200, len).unwrap();
        let b = evolve_slice(&rel, &moved, "g", &horizontal(theta), 200, len).unwrap();
        let j0 = shift * len / 16;
        for j in 0..len {
            prop_assert!((b.samples[(j + j0) % len] - a.samples[j]).norm() < 1e-11);
        }
    }

    #[test]
    fn phase_rotation_covariance(g in arb_datum(), theta in 0.0f64..5.0, phi in 0.0f64..6.3) {
        let rel = DispersionRelation::monomial(1, 3);
        let rot = Complex64::from_polar(1.0, phi);
        let rotated = StepFunction::new(g.breakpoints().to_vec(), g.values().iter().map(|v| v * rot).collect()).unwrap();
        let a = evolve_slice(&rel, &g, "g", &horizontal(theta), 128, 512).unwrap();
        let b = evolve_slice(&rel, &rotated, "g", &horizontal(theta), 128, 512).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            prop_assert!((x * rot - y).norm() < 1e-12);
        }
    }
}

#[test]
fn evolution_is_deterministic() {
    let g = StepFunction::half_indicator();
    let rel = DispersionRelation::monomial(-1, 2);
    let slice = horizontal(std::f64::consts::SQRT_2);
    let a = evolve_slice(&rel, &g, "g", &slice, 4096, 1 << 14).unwrap();
    let b = evolve_slice(&rel, &g, "g", &slice, 4096, 1 << 14).unwrap();
    assert_eq!(a, b);
}

#[test]
fn besov_block_norms_increase_with_p() {
    let g = StepFunction::half_indicator();
    let rel = DispersionRelation::monomial(-1, 2);
    let grid = evolve_slice(&rel, &g, "g", &horizontal(std::f64::consts::SQRT_2), 2048, 1 << 13).unwrap();
    let ps = [1.0, 2.0, 4.0, f64::INFINITY];
    let prof = besov_profile(&grid.samples, &ps).unwrap();
    for j in 0..prof.scales.len() {
        for (i, p) in ps.iter().enumerate().skip(1) {
            assert!(prof.norms[i][j] >= prof.norms[i - 1][j] * (1.0 - 1e-12), "scale {j} p {p}");
        }
    }
}
