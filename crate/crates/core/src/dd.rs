//! Double-double arithmetic (an unevaluated sum `hi + lo` of two `f64`s).
//!
//! Gives about 106 bits of significand, which is what the phase reduction and
//! continued-fraction code need. Products use Dekker splitting rather than FMA
//! so results do not depend on the target's FMA support.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: core::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    pub const TWO_PI: Self = Self {
        hi: core::f64::consts::TAU,
        lo: 2.4492935982947064e-16,
    };
    pub const E: Self = Self {
        hi: core::f64::consts::E,
        lo: 1.4456468917292502e-16,
    };
    pub const LN2: Self = Self {
        hi: core::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };
    pub const SQRT2: Self = Self {
        hi: core::f64::consts::SQRT_2,
        lo: -9.667293313452913e-17,
    };
    /// The golden ratio.
    pub const PHI: Self = Self {
        hi: 1.618033988749895,
        lo: -5.432115203682506e-17,
    };

    /// Builds a value from an already normalized pair.
    pub const fn from_parts(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact for `|n| < 2^106`.
    pub fn from_i128(n: i128) -> Self {
        let hi = n as f64;
        // `hi` is within half an ulp of `n`, so the residual fits in an i128.
        let rest = n.wrapping_sub(hi as i128);
        Self::new(hi, rest as f64)
    }

    pub fn from_ratio(num: i128, den: i128) -> Self {
        Self::from_i128(num) / Self::from_i128(den)
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0
    }

    pub fn is_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 += self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        let (p1, p2) = two_prod(q1, b);
        let (s, mut e) = two_sum(self.hi, -p1);
        e -= p2;
        e += self.lo;
        let q2 = (s + e) / b;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }
    }

    /// Multiplies by `2^k` exactly.
    pub fn ldexp(self, k: i32) -> Self {
        let s = math::powi(2.0, k);
        Self {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    pub fn square(self) -> Self {
        self * self
    }

    pub fn recip(self) -> Self {
        Self::ONE / self
    }

    pub fn floor(self) -> Self {
        let hi = math::floor(self.hi);
        if hi == self.hi {
            let lo = math::floor(self.lo);
            let (hi, lo) = quick_two_sum(hi, lo);
            Self { hi, lo }
        } else {
            Self { hi, lo: 0.0 }
        }
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(self) -> Self {
        let f = self - self.floor();
        if f.hi >= 1.0 {
            f - Self::ONE
        } else {
            f
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return Self::ZERO;
        }
        let x = 1.0 / math::sqrt(self.hi);
        let ax = self.hi * x;
        let (s1, s2) = two_prod(ax, ax);
        let diff = self - Self { hi: s1, lo: s2 };
        let (hi, lo) = two_sum(ax, diff.hi * (x * 0.5));
        Self { hi, lo }
    }

    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Self::ZERO;
        }
        let k = math::floor(self.hi / Self::LN2.hi + 0.5);
        let r = (self - Self::LN2.mul_f64(k)).ldexp(-10);
        // expm1(r) by Taylor series; |r| < 3.4e-4 after scaling.
        let mut sum = r;
        let mut term = r;
        let mut i = 2.0;
        loop {
            term = (term * r).div_f64(i);
            sum = sum + term;
            if math::abs(term.hi) < 1e-36 || i > 20.0 {
                break;
            }
            i += 1.0;
        }
        for _ in 0..10 {
            sum = sum.mul_f64(2.0) + sum.square();
        }
        (sum + Self::ONE).ldexp(k as i32)
    }

    /// Natural logarithm; returns NaN for non-positive input.
    pub fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Self::from_f64(f64::NAN);
        }
        let mut y = Self::from_f64(math::ln(self.hi));
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::ONE;
        }
        y
    }

    /// `self^e` for positive `self`.
    pub fn powf(self, e: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        (e * self.ln()).exp()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, mut s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        s2 += t1;
        let (s1, mut s2) = quick_two_sum(s1, s2);
        s2 += t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

impl PartialOrd for DoubleDouble {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            ord => ord,
        }
    }
}

impl fmt::Display for DoubleDouble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} + {:e}", self.hi, self.lo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: DoubleDouble, b: DoubleDouble, tol: f64) -> bool {
        math::abs((a - b).to_f64()) <= tol * math::abs(b.to_f64()).max(1.0)
    }

    #[test]
    fn sqrt_two_matches_reference() {
        let s = DoubleDouble::from_f64(2.0).sqrt();
        assert!(close(s, DoubleDouble::SQRT2, 1e-31), "{s}");
        assert!(close(s.square(), DoubleDouble::from_f64(2.0), 1e-31));
    }

    #[test]
    fn exp_ln_round_trip() {
        let one = DoubleDouble::ONE;
        assert!(close(one.exp(), DoubleDouble::E, 1e-30));
        let two = DoubleDouble::from_f64(2.0);
        assert!(close(two.ln(), DoubleDouble::LN2, 1e-30));
        for x in [0.125, 3.5, 17.25, 1000.0] {
            let v = DoubleDouble::from_f64(x);
            assert!(close(v.ln().exp(), v, 1e-29), "x = {x}");
        }
    }

    #[test]
    fn golden_ratio_constant() {
        let five = DoubleDouble::from_f64(5.0);
        let phi = (five.sqrt() + DoubleDouble::ONE).mul_f64(0.5);
        assert!(close(phi, DoubleDouble::PHI, 1e-31));
    }

    #[test]
    fn three_halves_power_of_integer() {
        // 2^20 ^ (3/2) = 2^30 exactly.
        let n = DoubleDouble::from_i128(1 << 20);
        let p = n.powf(DoubleDouble::from_ratio(3, 2));
        assert!(close(p, DoubleDouble::from_i128(1 << 30), 1e-29));
    }

    #[test]
    fn from_i128_is_exact_below_2_pow_106() {
        let n: i128 = (1i128 << 100) + 12345;
        let d = DoubleDouble::from_i128(n);
        assert_eq!(d.hi() as i128 + d.lo() as i128, n);
    }

    #[test]
    fn fract_and_floor() {
        let x = DoubleDouble::from_f64(-2.25);
        assert_eq!(x.floor().to_f64(), -3.0);
        assert_eq!(x.fract().to_f64(), 0.75);
    }
}
