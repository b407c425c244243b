//! Dispersion relations and loss-free reduction of `tω(n) + nx` modulo 2π.
//!
//! Times are carried as `θ = t/2π` and angles as [`Turns`], so the phase is
//! `θ·ω(n) + n·x` modulo one turn. Integer `ω` values times a 128-bit turn
//! fraction reduce exactly; non-integer values are split into an integer part
//! (exact) and a fractional part handled in double-double.

use alloc::format;
use alloc::string::String;

use crate::dd::DoubleDouble;
use crate::diophantine::ReducedRational;
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::turns::Turns;

/// Angles are fractions of a turn: `x = 2π·turns`.
pub type Angle = Turns;

#[derive(Clone, Debug, PartialEq)]
pub enum DispersionRelation {
    /// Integer-coefficient polynomial of degree at least one.
    Polynomial(IntPoly),
    /// `|n|^α`.
    FractionalPower(DoubleDouble),
    /// `sqrt(n² + n⁴)`.
    Boussinesq,
    /// `n|n|`.
    BenjaminOno,
    /// `sqrt(|n| tanh|n|)`.
    Gravity,
    /// `sqrt((|n| + |n|³) tanh|n|)`.
    GravityCapillary,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OmegaValue {
    Integer(i128),
    Real(DoubleDouble),
}

impl OmegaValue {
    pub fn to_dd(self) -> DoubleDouble {
        match self {
            OmegaValue::Integer(w) => DoubleDouble::from_i128(w),
            OmegaValue::Real(w) => w,
        }
    }

    pub fn to_f64(self) -> f64 {
        self.to_dd().to_f64()
    }
}

// Beyond this 1 − tanh|n| is below double-double resolution of the phase.
const TANH_SATURATION: i128 = 20;

fn tanh_dd(n: i128) -> DoubleDouble {
    if n >= TANH_SATURATION {
        return DoubleDouble::ONE;
    }
    let e = DoubleDouble::from_i128(2 * n).exp();
    DoubleDouble::ONE - DoubleDouble::from_f64(2.0) / (e + DoubleDouble::ONE)
}

impl DispersionRelation {
    pub fn polynomial(poly: IntPoly) -> Result<Self> {
        if poly.degree() == 0 {
            return Err(Error::Domain("dispersion polynomial must have degree >= 1".into()));
        }
        Ok(DispersionRelation::Polynomial(poly))
    }

    /// `c·n^d`.
    pub fn monomial(c: i64, d: usize) -> Self {
        DispersionRelation::Polynomial(IntPoly::monomial(c, d))
    }

    pub fn fractional(alpha: DoubleDouble) -> Result<Self> {
        if !(alpha.hi() > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain("fractional power must be positive".into()));
        }
        Ok(DispersionRelation::FractionalPower(alpha))
    }

    pub fn as_polynomial(&self) -> Option<&IntPoly> {
        match self {
            DispersionRelation::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// Integer-valued on all of ℤ.
    pub fn is_integer_valued(&self) -> bool {
        matches!(
            self,
            DispersionRelation::Polynomial(_) | DispersionRelation::BenjaminOno
        )
    }

    /// Growth exponent of `|ω(n)|` for large `|n|`.
    pub fn order(&self) -> f64 {
        match self {
            DispersionRelation::Polynomial(p) => p.degree() as f64,
            DispersionRelation::FractionalPower(a) => a.to_f64(),
            DispersionRelation::Boussinesq | DispersionRelation::BenjaminOno => 2.0,
            DispersionRelation::Gravity => 0.5,
            DispersionRelation::GravityCapillary => 1.5,
        }
    }

    pub fn omega_value(&self, n: i128) -> Result<OmegaValue> {
        let m = n.unsigned_abs() as i128;
        let v = match self {
            DispersionRelation::Polynomial(p) => {
                OmegaValue::Integer(p.eval_checked(n).ok_or(Error::Overflow { n })?)
            }
            DispersionRelation::BenjaminOno => {
                OmegaValue::Integer(n.checked_mul(m).ok_or(Error::Overflow { n })?)
            }
            DispersionRelation::FractionalPower(alpha) => {
                if m == 0 {
                    OmegaValue::Integer(0)
                } else {
                    OmegaValue::Real(DoubleDouble::from_i128(m).powf(*alpha))
                }
            }
            DispersionRelation::Boussinesq => {
                let sq = m.checked_mul(m).ok_or(Error::Overflow { n })?;
                let s = sq
                    .checked_mul(sq)
                    .and_then(|q| q.checked_add(sq))
                    .filter(|&s| s < 1 << 104)
                    .ok_or(Error::Overflow { n })?;
                OmegaValue::Real(DoubleDouble::from_i128(s).sqrt())
            }
            DispersionRelation::Gravity => {
                OmegaValue::Real((DoubleDouble::from_i128(m) * tanh_dd(m)).sqrt())
            }
            DispersionRelation::GravityCapillary => {
                let s = m
                    .checked_mul(m)
                    .and_then(|q| q.checked_mul(m))
                    .and_then(|c| c.checked_add(m))
                    .filter(|&s| s < 1 << 104)
                    .ok_or(Error::Overflow { n })?;
                OmegaValue::Real((DoubleDouble::from_i128(s) * tanh_dd(m)).sqrt())
            }
        };
        Ok(v)
    }

    /// Grammar string understood by the CLI (`poly:…`, `frac:…`, `bo`, …).
    pub fn spec_string(&self) -> String {
        match self {
            DispersionRelation::Polynomial(p) => format!("{p}"),
            DispersionRelation::FractionalPower(a) => format!("frac:{}", a.to_f64()),
            DispersionRelation::Boussinesq => "boussinesq".into(),
            DispersionRelation::BenjaminOno => "bo".into(),
            DispersionRelation::Gravity => "gravity".into(),
            DispersionRelation::GravityCapillary => "gravcap".into(),
        }
    }
}

/// `θ = t/2π`, either an exact rational or a fixed-point real with 128
/// fractional bits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HighPrecisionTime {
    Rational(ReducedRational),
    Fixed { whole: i128, frac: Turns },
}

impl HighPrecisionTime {
    pub const ZERO: Self = HighPrecisionTime::Fixed {
        whole: 0,
        frac: Turns::ZERO,
    };

    /// `θ = a/q`.
    pub fn rational(a: i128, q: i128) -> Result<Self> {
        let r = ReducedRational::new(a, q)?;
        if r.denominator() >= 1 << 63 {
            return Err(Error::Domain("time denominator must be below 2^63".into()));
        }
        Ok(HighPrecisionTime::Rational(r))
    }

    pub fn from_theta(theta: DoubleDouble) -> Self {
        let w = theta.floor();
        HighPrecisionTime::Fixed {
            whole: w.hi() as i128 + w.lo() as i128,
            frac: Turns::from_dd(theta),
        }
    }

    /// From `t` in radians.
    pub fn from_t(t: DoubleDouble) -> Self {
        Self::from_theta(t / DoubleDouble::TWO_PI)
    }

    pub fn theta(&self) -> DoubleDouble {
        match *self {
            HighPrecisionTime::Rational(r) => r.to_dd(),
            HighPrecisionTime::Fixed { whole, frac } => DoubleDouble::from_i128(whole) + frac.to_dd(),
        }
    }

    pub fn t(&self) -> DoubleDouble {
        self.theta() * DoubleDouble::TWO_PI
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            HighPrecisionTime::Rational(r) => r.numerator() == 0,
            HighPrecisionTime::Fixed { whole, frac } => whole == 0 && frac == Turns::ZERO,
        }
    }

    /// `θ·w` modulo one, exact.
    pub fn times_integer(&self, w: i128) -> Turns {
        match *self {
            HighPrecisionTime::Rational(r) => {
                let q = r.denominator();
                let a = r.numerator().rem_euclid(q) as u128;
                let res = (a * w.rem_euclid(q) as u128) % q as u128;
                Turns::from_ratio(res as i128, q as u64)
            }
            HighPrecisionTime::Fixed { frac, .. } => frac.mul_int(w),
        }
    }

    /// `θ·ω` modulo one.
    pub fn times_omega(&self, w: OmegaValue) -> Turns {
        match w {
            OmegaValue::Integer(w) => self.times_integer(w),
            OmegaValue::Real(w) => {
                let fl = w.floor();
                let whole = fl.hi() as i128 + fl.lo() as i128;
                self.times_integer(whole) + Turns::from_dd(self.theta() * (w - fl))
            }
        }
    }

    pub fn spec_string(&self) -> String {
        match self {
            HighPrecisionTime::Rational(r) => format!("rat:{r}"),
            HighPrecisionTime::Fixed { .. } => format!("{:.17}", self.theta().to_f64()),
        }
    }
}

/// `tω(n) + nx` modulo 2π, as a fraction of a turn.
pub fn phase(
    rel: &DispersionRelation,
    n: i128,
    t: &HighPrecisionTime,
    x: Angle,
) -> Result<Angle> {
    let time_part = match (rel, t) {
        (DispersionRelation::Polynomial(p), HighPrecisionTime::Rational(r)) => {
            // Residues only, so this never overflows.
            let q = r.denominator() as u64;
            let a = r.numerator().rem_euclid(q as i128) as u128;
            let res = (a * p.eval_mod(n, q) as u128) % q as u128;
            Turns::from_ratio(res as i128, q)
        }
        _ => t.times_omega(rel.omega_value(n)?),
    };
    Ok(time_part + x.mul_int(n))
}

/// `e^{i(tω(n) + nx)}` evaluated through [`phase`].
pub fn phase_factor(
    rel: &DispersionRelation,
    n: i128,
    t: &HighPrecisionTime,
    x: Angle,
) -> Result<num_complex::Complex64> {
    Ok(phase(rel, n, t, x)?.unit())
}

pub fn omega_f64(rel: &DispersionRelation, n: i128) -> Result<f64> {
    Ok(rel.omega_value(n)?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Turns, b: Turns) -> bool {
        (a.0.wrapping_sub(b.0) as i128).unsigned_abs() < 1 << 64
    }

    #[test]
    fn omega_examples() {
        let airy = DispersionRelation::monomial(1, 3);
        assert_eq!(airy.omega_value(10).unwrap(), OmegaValue::Integer(1000));
        let b = DispersionRelation::Boussinesq.omega_value(2).unwrap().to_f64();
        assert!((b - 20f64.sqrt()).abs() < 1e-15);
        let g = DispersionRelation::Gravity.omega_value(1).unwrap().to_f64();
        assert!((g - 1f64.tanh().sqrt()).abs() < 1e-15);
        assert!((g - 0.872_693_620_897_829_6).abs() < 1e-15);
        assert_eq!(
            DispersionRelation::BenjaminOno.omega_value(-3).unwrap(),
            OmegaValue::Integer(-9)
        );
    }

    #[test]
    fn overflow_reported() {
        let p = DispersionRelation::monomial(1, 5);
        assert!(p.omega_value(1 << 20).is_ok());
        assert_eq!(p.omega_value(1 << 26), Err(Error::Overflow { n: 1 << 26 }));
    }

    #[test]
    fn rational_phase_examples() {
        let airy = DispersionRelation::monomial(1, 3);
        let t = HighPrecisionTime::rational(3, 7).unwrap();
        let p = phase(&airy, 10, &t, Turns::ZERO).unwrap();
        assert_eq!(p, Turns::from_ratio(4, 7));
        assert!((p.radians() - 8.0 * core::f64::consts::PI / 7.0).abs() < 1e-15);

        let schr = DispersionRelation::monomial(-1, 2);
        let t = HighPrecisionTime::rational(1, 4).unwrap();
        let p = phase(&schr, 3, &t, Turns::ZERO).unwrap();
        assert_eq!(p, Turns::from_ratio(3, 4));

        let p0 = phase(&DispersionRelation::Gravity, 0, &t, Turns::ZERO).unwrap();
        assert_eq!(p0, Turns::ZERO);
    }

    #[test]
    fn fixed_point_matches_rational_for_dyadic_time() {
        let rel = DispersionRelation::monomial(1, 3);
        let tr = HighPrecisionTime::rational(5, 16).unwrap();
        let tf = HighPrecisionTime::from_theta(DoubleDouble::from_ratio(5, 16));
        let x = Turns::from_ratio(1, 3);
        for n in -300..300 {
            assert_eq!(
                phase(&rel, n, &tr, x).unwrap(),
                phase(&rel, n, &tf, x).unwrap()
            );
        }
    }

    #[test]
    fn real_omega_split_is_consistent() {
        // |n|^2 as a fractional power must agree with the polynomial n^2.
        let frac = DispersionRelation::fractional(DoubleDouble::from_f64(2.0)).unwrap();
        let poly = DispersionRelation::monomial(1, 2);
        let t = HighPrecisionTime::from_theta(DoubleDouble::SQRT2);
        for n in [1i128, 7, 1000, 65_535] {
            let a = phase(&frac, n, &t, Turns::ZERO).unwrap();
            let b = phase(&poly, n, &t, Turns::ZERO).unwrap();
            assert!(close(a, b), "n = {n}: {:e} vs {:e}", a.to_f64(), b.to_f64());
        }
    }
}
