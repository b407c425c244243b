//! Step-function data on the torus with closed-form Fourier coefficients.
//!
//! Positions are fractions of a turn (`x = 2π·turns`). Breakpoints given as
//! rational multiples of 2π are kept exact, so `e^{−inx_j}` reduces by residue
//! arithmetic and the coefficients are bit-stable.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::diophantine::ReducedRational;
use crate::error::{Error, Result};
use crate::turns::Turns;

/// Breakpoint position in turns, in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Breakpoint {
    Rational(ReducedRational),
    Real(Turns),
}

impl Breakpoint {
    /// `p/q` of a turn, reduced modulo one.
    pub fn rational(p: i128, q: i128) -> Result<Self> {
        let r = ReducedRational::new(p, q)?;
        if r.denominator() >= 1 << 62 {
            return Err(Error::Domain("breakpoint denominator too large".into()));
        }
        let q = r.denominator();
        Ok(Breakpoint::Rational(ReducedRational::new(r.numerator().rem_euclid(q), q)?))
    }

    pub fn from_radians(x: f64) -> Self {
        Breakpoint::Real(Turns::from_radians(x))
    }

    pub fn turns(&self) -> Turns {
        match *self {
            Breakpoint::Rational(r) => Turns::from_ratio(r.numerator(), r.denominator() as u64),
            Breakpoint::Real(t) => t,
        }
    }

    /// `e^{−inx}`.
    pub fn character(&self, n: i128) -> Complex64 {
        match *self {
            Breakpoint::Rational(r) => {
                let q = r.denominator();
                let res = ((r.numerator().rem_euclid(q) as u128 * n.rem_euclid(q) as u128) % q as u128) as i128;
                Turns::from_ratio(-res, q as u64).unit()
            }
            Breakpoint::Real(t) => t.mul_int(-n).unit(),
        }
    }

    /// Translate by `m/q` of a turn.
    pub fn shifted(&self, m: i128, q: i128) -> Self {
        match *self {
            Breakpoint::Rational(r) => {
                let den = r.denominator() * q / crate::diophantine::gcd(r.denominator(), q);
                let num = r.numerator() * (den / r.denominator()) + m * (den / q);
                Breakpoint::rational(num, den).expect("nonzero denominator")
            }
            Breakpoint::Real(t) => Breakpoint::Real(t + Turns::from_ratio(m, q as u64)),
        }
    }
}

/// Anything that supplies Fourier coefficients `ĝ(n) = (1/2π)∫ g e^{−inx}`.
pub trait CoefficientSource {
    fn coefficient(&self, n: i128) -> Complex64;

    /// `ĝ(−M), …, ĝ(M)`.
    fn truncated(&self, m: usize) -> Vec<Complex64> {
        let m = m as i128;
        (-m..=m).map(|n| self.coefficient(n)).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<Breakpoint>,
    values: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegularityTag {
    /// `sup{r : g ∈ H^r}`; infinite for constants.
    pub r0: f64,
    pub in_bv: bool,
}

impl StepFunction {
    /// `values[j]` holds on `[x_j, x_{j+1})`, cyclically.
    pub fn new(breakpoints: Vec<Breakpoint>, values: Vec<Complex64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::Domain(
                "step function needs as many values as breakpoints (at least one)".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0].turns() >= w[1].turns()) {
            return Err(Error::Domain("breakpoints must be strictly increasing in [0, 2pi)".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain("step values must be finite".into()));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn constant(c: Complex64) -> Self {
        Self {
            breakpoints: alloc::vec![Breakpoint::Rational(ReducedRational::integer(0))],
            values: alloc::vec![c],
        }
    }

    /// Indicator of `[2πa, 2πb)` for rational turn fractions `0 ≤ a < b ≤ 1`.
    pub fn indicator(a: (i128, i128), b: (i128, i128)) -> Result<Self> {
        let lo = Breakpoint::rational(a.0, a.1)?;
        let hi = Breakpoint::rational(b.0, b.1)?;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        if hi.turns() == Turns::ZERO {
            return Self::new(alloc::vec![Breakpoint::rational(0, 1)?, lo], alloc::vec![zero, one]);
        }
        if lo.turns() == Turns::ZERO {
            return Self::new(alloc::vec![lo, hi], alloc::vec![one, zero]);
        }
        Self::new(
            alloc::vec![Breakpoint::rational(0, 1)?, lo, hi],
            alloc::vec![zero, one, zero],
        )
    }

    /// `χ_{[0,π)}`.
    pub fn half_indicator() -> Self {
        Self::indicator((0, 1), (1, 2)).expect("valid indicator")
    }

    pub fn breakpoints(&self) -> &[Breakpoint] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Cyclic jump sum `Σ|c_j − c_{j−1}|`.
    pub fn total_variation(&self) -> f64 {
        self.jumps().map(|(_, j)| j.norm()).sum()
    }

    /// `(x_j, c_j − c_{j−1})`.
    fn jumps(&self) -> impl Iterator<Item = (&Breakpoint, Complex64)> + '_ {
        let j = self.values.len();
        self.breakpoints
            .iter()
            .enumerate()
            .map(move |(i, b)| (b, self.values[i] - self.values[(i + j - 1) % j]))
    }

    /// Interval lengths in turns, cyclic.
    fn lengths(&self) -> Vec<DoubleDouble> {
        let j = self.breakpoints.len();
        (0..j)
            .map(|i| {
                let a = self.breakpoints[i].turns();
                let b = self.breakpoints[(i + 1) % j].turns();
                let d = b - a;
                if d == Turns::ZERO {
                    DoubleDouble::ONE
                } else {
                    d.to_dd()
                }
            })
            .collect()
    }

    pub fn mean(&self) -> Complex64 {
        let lens = self.lengths();
        let re = lens
            .iter()
            .zip(&self.values)
            .fold(DoubleDouble::ZERO, |s, (l, v)| s + l.mul_f64(v.re));
        let im = lens
            .iter()
            .zip(&self.values)
            .fold(DoubleDouble::ZERO, |s, (l, v)| s + l.mul_f64(v.im));
        Complex64::new(re.to_f64(), im.to_f64())
    }

    /// `∫_0^{2π} |g|²`.
    pub fn l2_norm_sq(&self) -> f64 {
        let lens = self.lengths();
        let s = lens
            .iter()
            .zip(&self.values)
            .fold(DoubleDouble::ZERO, |s, (l, v)| s + l.mul_f64(v.norm_sqr()));
        2.0 * PI * s.to_f64()
    }

    pub fn regularity(&self) -> RegularityTag {
        RegularityTag {
            r0: if self.is_constant() { f64::INFINITY } else { 0.5 },
            in_bv: true,
        }
    }

    /// Value at `x` (right-continuous).
    pub fn value_at(&self, x: Turns) -> Complex64 {
        let idx = self.breakpoints.partition_point(|b| b.turns() <= x);
        if idx == 0 {
            *self.values.last().unwrap()
        } else {
            self.values[idx - 1]
        }
    }

    /// Distance in turns from `x` to the nearest breakpoint, cyclic.
    pub fn distance_to_jump(&self, x: Turns) -> f64 {
        self.jumps()
            .filter(|(_, j)| *j != Complex64::new(0.0, 0.0))
            .map(|(b, _)| {
                let d = (x - b.turns()).to_signed_f64();
                d.abs()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `Σ_m w_m g(x − m/q)` as a step function on the translated breakpoints.
    pub fn translate_combination(&self, q: i128, weights: &[Complex64]) -> Result<StepFunction> {
        assert_eq!(weights.len() as i128, q);
        let mut points: Vec<Breakpoint> = Vec::new();
        for (m, w) in weights.iter().enumerate() {
            if *w == Complex64::new(0.0, 0.0) {
                continue;
            }
            points.extend(self.breakpoints.iter().map(|b| b.shifted(m as i128, q)));
        }
        if points.is_empty() {
            return Ok(StepFunction::constant(Complex64::new(0.0, 0.0)));
        }
        points.sort_by_key(|p| p.turns());
        points.dedup_by(|a, b| a.turns() == b.turns());
        let n = points.len();
        let values = (0..n)
            .map(|k| {
                let a = points[k].turns();
                let b = points[(k + 1) % n].turns();
                let mut width = b - a;
                if width == Turns::ZERO {
                    width = Turns(u128::MAX);
                }
                let mid = a + Turns(width.0 / 2);
                weights
                    .iter()
                    .enumerate()
                    .map(|(m, w)| w * self.value_at(mid - Turns::from_ratio(m as i128, q as u64)))
                    .sum()
            })
            .collect();
        StepFunction::new(points, values)
    }
}

impl CoefficientSource for StepFunction {
    fn coefficient(&self, n: i128) -> Complex64 {
        if n == 0 {
            return self.mean();
        }
        let s: Complex64 = self.jumps().map(|(b, j)| j * b.character(n)).sum();
        s / Complex64::new(0.0, 2.0 * PI * n as f64)
    }
}

/// Step function plus an optional absolutely continuous part given through
/// its coefficients.
pub struct BvDatum {
    pub step: StepFunction,
    pub smooth: Option<Box<dyn Fn(i128) -> Complex64 + Send + Sync>>,
}

impl CoefficientSource for BvDatum {
    fn coefficient(&self, n: i128) -> Complex64 {
        let s = self.step.coefficient(n);
        match &self.smooth {
            Some(f) => s + f(n),
            None => s,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn half_indicator_coefficients() {
        let g = StepFunction::half_indicator();
        assert!((g.coefficient(0) - c(0.5)).norm() < 1e-16);
        assert!((g.coefficient(1) - Complex64::new(0.0, -1.0 / PI)).norm() < 1e-16);
        assert!(g.coefficient(2).norm() < 1e-16);
        assert!((g.coefficient(-3) - Complex64::new(0.0, 1.0 / (3.0 * PI))).norm() < 1e-16);
    }

    #[test]
    fn total_variation_examples() {
        assert_eq!(StepFunction::half_indicator().total_variation(), 2.0);
        assert_eq!(StepFunction::constant(c(5.0)).total_variation(), 0.0);
        let bps = (0..4).map(|k| Breakpoint::rational(k, 4).unwrap()).collect();
        let g = StepFunction::new(bps, alloc::vec![c(1.0), c(2.0), c(0.0), c(1.0)]).unwrap();
        assert_eq!(g.total_variation(), 4.0);
    }

    #[test]
    fn constant_has_single_mode() {
        let g = StepFunction::constant(Complex64::new(2.0, -1.0));
        assert_eq!(g.coefficient(0), Complex64::new(2.0, -1.0));
        assert_eq!(g.coefficient(7), Complex64::new(0.0, 0.0));
        assert_eq!(g.regularity().r0, f64::INFINITY);
        assert_eq!(StepFunction::half_indicator().regularity().r0, 0.5);
    }

    #[test]
    fn translate_by_half_turn() {
        let g = StepFunction::half_indicator();
        let u = g.translate_combination(2, &[c(0.0), c(1.0)]).unwrap();
        assert_eq!(u.value_at(Turns::from_ratio(1, 4)), c(0.0));
        assert_eq!(u.value_at(Turns::from_ratio(3, 4)), c(1.0));
    }

    #[test]
    fn rejects_unsorted_breakpoints() {
        let bps = alloc::vec![Breakpoint::rational(1, 2).unwrap(), Breakpoint::rational(1, 4).unwrap()];
        assert!(StepFunction::new(bps, alloc::vec![c(1.0), c(0.0)]).is_err());
    }
}
