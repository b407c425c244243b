use proptest::prelude::*;
use talbot::grammar::{parse_datum, parse_relation, parse_slice, parse_theta};
use talbot_core::dispersion::{DispersionRelation, HighPrecisionTime};
use talbot_core::evolution::SliceSpec;

proptest! {
    #[test]
    fn polynomial_spec_round_trips(coeffs in proptest::collection::vec(-50i64..50, 1..6), lead in 1i64..20, neg in any::<bool>()) {
        let mut desc = vec![if neg { -lead } else { lead }];
        desc.extend(coeffs);
        let s = format!("poly:{}", desc.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
        let rel = parse_relation(&s).unwrap();
        prop_assert_eq!(rel.spec_string(), s.clone());
        prop_assert_eq!(parse_relation(&rel.spec_string()).unwrap(), rel);
    }

    #[test]
    fn rational_slices_round_trip(a in -500i128..500, q in 1i128..10_000, k in 1u64..6, l in 1u64..6) {
        prop_assume!(talbot_core::diophantine::gcd(a, q) == 1 && talbot_core::diophantine::gcd(k as i128, l as i128) == 1);
        let t = HighPrecisionTime::rational(a, q).unwrap();
        for slice in [SliceSpec::Horizontal { t }, SliceSpec::oblique(t, k, l).unwrap()] {
            prop_assert_eq!(parse_slice(&slice.spec_string()).unwrap(), slice);
        }
    }

    #[test]
    fn pi_positions_are_exact(k in 0i128..8, q in 1i128..9) {
        prop_assume!(k < 2 * q && k > 0);
        let g = parse_datum(&format!("step:0,{k}pi/{q}")).unwrap();
        let expect = talbot_core::Turns::from_ratio(k, 2 * q as u64);
        prop_assert_eq!(g.breakpoints()[1].turns(), expect);
    }

    #[test]
    fn decimal_theta_is_exact_ratio(p in 0i64..1_000_000) {
        let s = format!("{}.{:06}", p / 1_000_000, p % 1_000_000);
        let t = parse_theta(&s).unwrap();
        let expect = talbot_core::DoubleDouble::from_ratio(p as i128, 1_000_000);
        prop_assert_eq!(t, HighPrecisionTime::from_theta(expect));
    }
}

#[test]
fn named_relations() {
    for (s, r) in [
        ("boussinesq", DispersionRelation::Boussinesq),
        ("bo", DispersionRelation::BenjaminOno),
        ("gravity", DispersionRelation::Gravity),
        ("gravcap", DispersionRelation::GravityCapillary),
    ] {
        assert_eq!(parse_relation(s).unwrap(), r);
        assert_eq!(r.spec_string(), s);
    }
}

#[test]
fn malformed_specs_are_rejected() {
    for s in ["horiz:", "obliq:kl:sqrt2", "obliq:kl:sqrt2:0/1", "vert:0:1,0", "diag:1", "horiz:kl:pi", "horiz:rat:1/0"] {
        assert!(parse_slice(s).is_err(), "{s}");
    }
    for s in ["step:", "step:0,pi:1,2,3", "step:0,pi:1", "bump:0", "step:0,0"] {
        assert!(parse_datum(s).is_err(), "{s}");
    }
}
