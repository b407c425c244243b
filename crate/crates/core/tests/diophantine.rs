use proptest::prelude::*;
use talbot_core::dd::DoubleDouble;
use talbot_core::diophantine::{
    dirichlet_approx, gauss_coefficient_sum, gcd, khinchin_levy_test, solve_time_for_ctr, ctr, Verdict,
};
use talbot_core::poly::IntPoly;

proptest! {
    #[test]
    fn dirichlet_bound_holds(x in 0.0f64..10.0, big_q in 1u64..1_000_000) {
        let theta = DoubleDouble::from_f64(x);
        let (r, rem) = dirichlet_approx(theta, big_q).unwrap();
        let q = r.denominator() as f64;
        prop_assert!(r.denominator() as u64 <= big_q);
        prop_assert!(rem.abs() <= 1.0 / (q * big_q as f64) * (1.0 + 1e-9));
        let direct = (x - r.to_f64()).abs();
        prop_assert!((direct - rem.abs()).abs() <= 1e-12 * x.max(1.0));
    }

    #[test]
    fn quadratic_gauss_magnitude(a in -500i128..500, q in 1u64..2000) {
        prop_assume!(gcd(a, q as i128) == 1);
        let g = gauss_coefficient_sum(a, q, &IntPoly::monomial(1, 2)).unwrap();
        let expect = match q % 4 {
            2 => 0.0,
            0 => (2.0 * q as f64).sqrt(),
            _ => (q as f64).sqrt(),
        };
        prop_assert!((g.norm() - expect).abs() < 1e-9 * (q as f64).max(1.0));
    }

    #[test]
    fn kl_verdict_monotone_in_eps(x in 0.001f64..1.0, e1 in 0.01f64..1.0, e2 in 0.01f64..1.0) {
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let theta = DoubleDouble::from_f64(x);
        let (Ok(a), Ok(b)) = (khinchin_levy_test(theta, 20, lo), khinchin_levy_test(theta, 20, hi)) else {
            return Ok(());
        };
        if b.verdict == Verdict::KhinchinLevyFail {
            prop_assert_eq!(a.verdict, Verdict::KhinchinLevyFail);
        }
        if a.verdict == Verdict::KhinchinLevyPass {
            prop_assert_eq!(b.verdict, Verdict::KhinchinLevyPass);
        }
    }

    #[test]
    fn ctr_inverts(c in 0.01f64..10.0, r in 2u32..8) {
        let t = solve_time_for_ctr(DoubleDouble::from_f64(c), r).unwrap();
        let back = ctr(t, r).to_f64();
        prop_assert!((back - c).abs() < 1e-13 * c);
    }
}

#[test]
fn quadratic_irrationals_pass() {
    for x in [DoubleDouble::SQRT2, DoubleDouble::PHI] {
        let class = khinchin_levy_test(x, 30, 0.25).unwrap();
        assert_eq!(class.verdict, Verdict::KhinchinLevyPass);
    }
    let third = DoubleDouble::from_ratio(1, 3);
    assert_eq!(khinchin_levy_test(third, 30, 0.25).unwrap().verdict, Verdict::Rational);
}
