use num_bigint::BigInt;
use proptest::prelude::*;
use talbot_core::dd::DoubleDouble;
use talbot_core::dispersion::{phase, DispersionRelation, HighPrecisionTime};
use talbot_core::poly::IntPoly;
use talbot_core::Turns;

fn reference_mul(frac: u128, w: i128) -> u128 {
    let m = BigInt::from(1u8) << 128;
    let p = (BigInt::from(frac) * BigInt::from(w)) % &m;
    let p = if p < BigInt::from(0) { p + &m } else { p };
    u128::try_from(p).unwrap()
}

fn omega_big(coeffs: &[i64], n: i128) -> BigInt {
    coeffs
        .iter()
        .rev()
        .fold(BigInt::from(0), |acc, &c| acc * BigInt::from(n) + BigInt::from(c))
}

proptest! {
    #[test]
    fn fixed_time_matches_wide_reference(frac in any::<u128>(), n in -(1i128 << 40)..(1i128 << 40), c in -5i64..=5, d in 1usize..=3) {
        prop_assume!(c != 0);
        let rel = DispersionRelation::monomial(c, d);
        let t = HighPrecisionTime::Fixed { whole: 3, frac: Turns(frac) };
        let got = phase(&rel, n, &t, Turns::ZERO).unwrap();
        let w = BigInt::from(c) * BigInt::from(n).pow(d as u32);
        let m = BigInt::from(1u8) << 128;
        let mut p = (BigInt::from(frac) * w) % &m;
        if p < BigInt::from(0) {
            p += &m;
        }
        prop_assert_eq!(got.0, u128::try_from(p).unwrap());
    }

    #[test]
    fn rational_time_is_exact_residue(a in -1000i128..1000, q in 1i128..100_000, n in -(1i128 << 50)..(1i128 << 50), c1 in -9i64..=9, c2 in -9i64..=9, c3 in -9i64..=9) {
        prop_assume!(c3 != 0 && talbot_core::diophantine::gcd(a, q) == 1);
        let coeffs = [0, c1, c2, c3];
        let rel = DispersionRelation::polynomial(IntPoly::new(coeffs.to_vec())).unwrap();
        let t = HighPrecisionTime::rational(a, q).unwrap();
        let got = phase(&rel, n, &t, Turns::ZERO).unwrap();
        let bq = BigInt::from(q);
        let mut r = (BigInt::from(a) * omega_big(&coeffs, n)) % &bq;
        if r < BigInt::from(0) {
            r += &bq;
        }
        let r = i128::try_from(r).unwrap();
        prop_assert_eq!(got, Turns::from_ratio(r, q as u64));
    }

    #[test]
    fn space_shift_by_a_turn_is_periodic(frac in any::<u128>(), x in any::<u128>(), n in -(1i128 << 60)..(1i128 << 60)) {
        let rel = DispersionRelation::monomial(-1, 2);
        let t = HighPrecisionTime::Fixed { whole: 0, frac: Turns(frac) };
        let p0 = phase(&rel, n, &t, Turns(x)).unwrap();
        // x + 1 turn wraps to the same 128-bit angle; the time part repeats under θ ↦ θ + 1.
        let t1 = HighPrecisionTime::Fixed { whole: 1, frac: Turns(frac) };
        prop_assert_eq!(p0, phase(&rel, n, &t1, Turns(x)).unwrap());
        prop_assert_eq!(Turns(x).mul_int(n).0, reference_mul(x, n));
    }

    #[test]
    fn ratio_is_periodic_in_numerator(p in -(1i128 << 60)..(1i128 << 60), q in 1u64..(1 << 40), k in -1000i128..1000) {
        prop_assert_eq!(Turns::from_ratio(p, q), Turns::from_ratio(p + k * q as i128, q));
    }

    #[test]
    fn from_dd_matches_truncated_fraction(x in 0.0f64..1.0) {
        let t = Turns::from_dd(DoubleDouble::from_f64(x));
        let expect = BigInt::from((x * 2f64.powi(64)) as u128) << 64;
        let got = BigInt::from(t.0);
        let diff = if got > expect { &got - &expect } else { &expect - &got };
        prop_assert!(diff < (BigInt::from(1u8) << 72));
    }
}

#[test]
fn rational_phase_is_periodic_in_n() {
    let rels = [
        DispersionRelation::monomial(-1, 2),
        DispersionRelation::monomial(1, 3),
        DispersionRelation::polynomial(IntPoly::new(vec![2, -3, 0, 5, 1])).unwrap(),
    ];
    for rel in &rels {
        for q in 1..=64i128 {
            for a in 1..q.max(2) {
                if talbot_core::diophantine::gcd(a, q) != 1 {
                    continue;
                }
                let t = HighPrecisionTime::rational(a, q).unwrap();
                for n in -q..q {
                    let p = phase(rel, n, &t, Turns::ZERO).unwrap();
                    assert_eq!(p, phase(rel, n + q, &t, Turns::ZERO).unwrap(), "q {q} a {a} n {n}");
                }
            }
        }
    }
}

#[test]
fn water_waves_stay_near_their_power_law() {
    let cap = DispersionRelation::GravityCapillary;
    let grav = DispersionRelation::Gravity;
    for n in 2..=(1i128 << 16) {
        let nf = n as f64;
        let w = talbot_core::dispersion::omega_f64(&cap, n).unwrap();
        assert!((w - nf.powf(1.5)).abs() <= 1.0, "n {n}");
        let w = talbot_core::dispersion::omega_f64(&grav, -n).unwrap();
        assert!((w - nf.sqrt()).abs() <= 1.0, "n {n}");
    }
}
