//! Angles stored as a 128-bit binary fraction of a full turn.
//!
//! Addition wraps modulo one turn and multiplication by an integer is exact
//! modulo one turn, which is all the phase reduction needs.

use core::ops::{Add, Neg, Sub};

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::math;

const TWO_POW_64: f64 = 18_446_744_073_709_551_616.0;
const TWO_POW_128: f64 = TWO_POW_64 * TWO_POW_64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Turns(pub u128);

impl Turns {
    pub const ZERO: Turns = Turns(0);
    pub const HALF: Turns = Turns(1 << 127);

    /// `(num mod den) / den`, rounded down to the nearest 2^-128.
    ///
    /// Exact whenever `den` is a power of two; `den` must be below 2^64.
    pub fn from_ratio(num: i128, den: u64) -> Turns {
        assert!(den > 0, "zero denominator");
        let den = den as u128;
        let r = num.rem_euclid(den as i128) as u128;
        let hi = (r << 64) / den;
        let rem = (r << 64) % den;
        let lo = (rem << 64) / den;
        Turns((hi << 64) | lo)
    }

    /// Fractional part of `x` (in turns).
    pub fn from_dd(x: DoubleDouble) -> Turns {
        let f = x.fract();
        let (hi, lo) = (f.hi(), f.lo());
        let hi_bits = if hi >= 1.0 {
            0u128
        } else {
            (hi * TWO_POW_128) as u128
        };
        let lo_bits = (lo * TWO_POW_128) as i128;
        Turns(hi_bits.wrapping_add(lo_bits as u128))
    }

    pub fn from_f64(x: f64) -> Turns {
        Turns::from_dd(DoubleDouble::from_f64(x))
    }

    pub fn from_radians(x: f64) -> Turns {
        Turns::from_dd(DoubleDouble::from_f64(x) / DoubleDouble::TWO_PI)
    }

    pub fn from_radians_dd(x: DoubleDouble) -> Turns {
        Turns::from_dd(x / DoubleDouble::TWO_PI)
    }

    /// `n * self` modulo one turn, exact.
    #[inline]
    pub fn mul_int(self, n: i128) -> Turns {
        Turns(self.0.wrapping_mul(n as u128))
    }

    /// Value in `[0, 1)`.
    pub fn to_f64(self) -> f64 {
        self.to_dd().to_f64()
    }

    pub fn to_dd(self) -> DoubleDouble {
        let hi = DoubleDouble::from_i128((self.0 >> 64) as i128).ldexp(-64);
        let lo = DoubleDouble::from_i128((self.0 as u64) as i128).ldexp(-128);
        hi + lo
    }

    /// Signed value in `[-1/2, 1/2)`.
    #[inline]
    pub fn to_signed_f64(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    /// Angle in `[0, 2π)`.
    pub fn radians(self) -> f64 {
        let r = (self.to_dd() * DoubleDouble::TWO_PI).to_f64();
        if r >= core::f64::consts::TAU {
            0.0
        } else {
            r
        }
    }

    /// `e^{2πi·self}`.
    #[inline]
    pub fn unit(self) -> Complex64 {
        let (s, c) = math::sin_cos(core::f64::consts::TAU * self.to_signed_f64());
        Complex64::new(c, s)
    }
}

impl Add for Turns {
    type Output = Turns;
    #[inline]
    fn add(self, b: Turns) -> Turns {
        Turns(self.0.wrapping_add(b.0))
    }
}

impl Sub for Turns {
    type Output = Turns;
    #[inline]
    fn sub(self, b: Turns) -> Turns {
        Turns(self.0.wrapping_sub(b.0))
    }
}

impl Neg for Turns {
    type Output = Turns;
    #[inline]
    fn neg(self) -> Turns {
        Turns(self.0.wrapping_neg())
    }
}
