//! Exact calculators for the predicted exponents and dimension intervals that
//! annotate measured fits.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

fn q(n: i64, d: i64) -> Q {
    Ratio::new(n, d)
}

fn one() -> Q {
    Ratio::from_integer(1)
}

fn two() -> Q {
    Ratio::from_integer(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Exponent(Q),
    Interval(Q, Q),
}

impl BoundValue {
    pub fn lower(&self) -> Q {
        match *self {
            BoundValue::Exponent(e) => e,
            BoundValue::Interval(lo, _) => lo,
        }
    }

    pub fn upper(&self) -> Q {
        match *self {
            BoundValue::Exponent(e) => e,
            BoundValue::Interval(_, hi) => hi,
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (ratio_f64(self.lower()), ratio_f64(self.upper()))
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundValue::Exponent(e) => write!(f, "{e}"),
            BoundValue::Interval(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

pub fn ratio_f64(r: Q) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub name: String,
    pub value: BoundValue,
    /// What the bound controls, e.g. "sup exponent of the degree-3 Weyl sum".
    pub description: String,
}

fn check_degree(d: u32, min: u32) -> Result<i64> {
    if d < min || d > 30 {
        return Err(Error::Domain(format!("degree {d} must lie in {min}..=30")));
    }
    Ok(d as i64)
}

/// Graph dimension range `[2 − 1/(2d), 2 − 1/(d(2^d+1))]` of oblique slices
/// of a degree-`d` polynomial evolution.
pub fn oblique_interval(d: u32) -> Result<BoundValue> {
    let d = check_degree(d, 2)?;
    let lo = two() - q(1, 2 * d);
    let hi = two() - q(1, d * ((1i64 << d) + 1));
    Ok(BoundValue::Interval(lo, hi))
}

/// Weyl sup exponent `2^{1−d}`.
pub fn weyl_exponent(d: u32) -> Result<Q> {
    let d = check_degree(d, 1)?;
    Ok(q(2, 1i64 << d))
}

/// Space-slice dimension range `[1 + 1/(d(d−1)), 2 − 1/(d(d−1))]` from
/// Vinogradov mean value estimates.
pub fn vinogradov_interval(d: u32) -> Result<BoundValue> {
    let d = check_degree(d, 2)?;
    let e = q(1, d * (d - 1));
    Ok(BoundValue::Interval(one() + e, two() - e))
}

/// Square root cancellation saving `β` for `|n|^α`, `α ∈ (0, 2) \ {1}`.
pub fn vdc_beta(alpha: Q) -> Result<Q> {
    if alpha <= Q::from_integer(0) || alpha >= two() || alpha == one() {
        return Err(Error::Domain(format!("alpha {alpha} must lie in (0, 2) without 1")));
    }
    Ok(if alpha < one() {
        alpha / 2
    } else if alpha <= q(3, 2) {
        one() - alpha / 2
    } else {
        q(1, 2) - alpha / 6
    })
}

/// Smoothing exponent of the fractional NLS, `α ∈ (1, 2)`.
pub fn frac_nls_beta(alpha: Q) -> Result<Q> {
    if alpha <= one() || alpha >= two() {
        return Err(Error::Domain(format!("alpha {alpha} must lie in (1, 2)")));
    }
    if alpha < q(4, 3) {
        Ok(alpha - one())
    } else {
        vdc_beta(alpha)
    }
}

/// Sup exponent for `|n|^α`, `α ∈ (d−1, d)`, from the Weyl differencing and
/// Vinogradov bounds for the degree-`d` approximant.
pub fn heath_brown_exponent(alpha: Q, d: u32) -> Result<Q> {
    let d = check_degree(d, 3)?;
    let lo = Q::from_integer(d - 1);
    if alpha <= lo || alpha >= Q::from_integer(d) {
        return Err(Error::Domain(format!("alpha {alpha} must lie in ({}, {d})", d - 1)));
    }
    let frac = alpha - lo;
    Ok(if frac > q(2, d + 1) {
        one() - q(1, d * (d + 1))
    } else {
        one() - (one() - frac) / (d * (d - 1))
    })
}

/// `kα + ℓ − k` for an exponent pair `(k, ℓ)`.
pub fn exponent_pair_bound(k: Q, l: Q, alpha: Q) -> Result<Q> {
    let half = q(1, 2);
    if k < Q::from_integer(0) || k > half || l < half || l > one() {
        return Err(Error::Domain(format!("({k}, {l}) is not an exponent pair shape")));
    }
    Ok(k * alpha + l - k)
}

/// Dimension lower bound `2 − (2r₀ − (r₀−s)q′)/(2 − q′)` from an
/// `L^q_t` Strichartz estimate with `r₀ ∈ (0, 1]` Hölder regularity of the
/// datum and gain `s`. `q = None` stands for `q = ∞`.
pub fn strichartz_lower(r0: Q, s: Q, q_exp: Option<Q>) -> Result<Q> {
    let zero = Q::from_integer(0);
    if r0 <= zero || r0 > one() || s < zero || s > r0 {
        return Err(Error::Domain(format!("need 0 < r0 ≤ 1 and 0 ≤ s ≤ r0, got {r0}, {s}")));
    }
    let qp = match q_exp {
        None => one(),
        Some(qe) if qe > two() => qe / (qe - one()),
        Some(qe) => return Err(Error::Domain(format!("q = {qe} must exceed 2"))),
    };
    Ok(two() - (two() * r0 - (r0 - s) * qp) / (two() - qp))
}

/// Sup exponent `α/2 − (α−1)2^{1−r}` for `α = r/(r−1)` at Khinchin–Lévy
/// times.
pub fn t32_exponent(r: u32) -> Result<Q> {
    let r = check_degree(r, 3)?;
    let alpha = q(r, r - 1);
    Ok(alpha / 2 - (alpha - one()) * q(2, 1i64 << r))
}

/// Graph dimension upper bound `1 + e` implied by a sup exponent `e`.
pub fn dimension_upper_from_sup(e: Q) -> Q {
    one() + e
}

fn report(name: &str, value: BoundValue, description: &str) -> BoundReport {
    BoundReport {
        name: name.into(),
        value,
        description: description.into(),
    }
}

/// The named table of headline bounds.
pub fn bound_table() -> Result<Vec<BoundReport>> {
    let three_halves = q(3, 2);
    let t32 = t32_exponent(3)?;
    let gain = (two() - three_halves) / 8;
    let t32_lower = strichartz_lower(q(1, 2), gain, Some(Q::from_integer(4)))?;
    Ok(alloc::vec![
        report(
            "oblique_dimension_quadratic",
            oblique_interval(2)?,
            "graph dimension of oblique slices, omega = n^2",
        ),
        report(
            "oblique_dimension_cubic",
            oblique_interval(3)?,
            "graph dimension of oblique slices, omega = n^3",
        ),
        report(
            "weyl_sup_quadratic",
            BoundValue::Exponent(weyl_exponent(2)?),
            "sup exponent of the quadratic Weyl sum",
        ),
        report(
            "vinogradov_dimension_cubic",
            vinogradov_interval(3)?,
            "space-slice dimension, omega = n^3",
        ),
        report(
            "strichartz_dimension_step",
            BoundValue::Exponent(strichartz_lower(q(1, 2), Q::from_integer(0), Some(Q::from_integer(4)))?),
            "dimension lower bound from L^4 Strichartz, bounded variation datum",
        ),
        report(
            "fractional_sup_three_halves",
            BoundValue::Exponent(t32),
            "sup exponent for |n|^{3/2} at Khinchin-Levy times",
        ),
        report(
            "fractional_dimension_three_halves",
            BoundValue::Interval(t32_lower, dimension_upper_from_sup(t32)),
            "graph dimension for |n|^{3/2} at Khinchin-Levy times",
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn headline_fractions() {
        assert_eq!(oblique_interval(2).unwrap(), BoundValue::Interval(q(7, 4), q(19, 10)));
        assert_eq!(oblique_interval(3).unwrap(), BoundValue::Interval(q(11, 6), q(53, 27)));
        assert_eq!(t32_exponent(3).unwrap(), q(5, 8));
        assert_eq!(t32_exponent(4).unwrap(), q(5, 8));
        assert_eq!(
            strichartz_lower(q(1, 2), Q::from_integer(0), Some(Q::from_integer(4))).unwrap(),
            q(3, 2)
        );
        assert_eq!(
            strichartz_lower(q(1, 2), q(1, 16), Some(Q::from_integer(4))).unwrap(),
            q(11, 8)
        );
        assert_eq!(strichartz_lower(one(), Q::from_integer(0), Some(q(3, 1))).unwrap(), one());
    }

    #[test]
    fn branches() {
        assert_eq!(weyl_exponent(1).unwrap(), one());
        assert_eq!(weyl_exponent(3).unwrap(), q(1, 4));
        assert_eq!(vinogradov_interval(3).unwrap(), BoundValue::Interval(q(7, 6), q(11, 6)));
        assert_eq!(vdc_beta(q(1, 2)).unwrap(), q(1, 4));
        assert_eq!(vdc_beta(q(3, 2)).unwrap(), q(1, 4));
        assert_eq!(vdc_beta(q(9, 5)).unwrap(), q(1, 5));
        assert!(vdc_beta(one()).is_err());
        assert_eq!(frac_nls_beta(q(6, 5)).unwrap(), q(1, 5));
        assert_eq!(frac_nls_beta(q(7, 5)).unwrap(), q(3, 10));
        assert_eq!(frac_nls_beta(q(4, 3)).unwrap(), q(4, 3) - one());
        assert_eq!(heath_brown_exponent(q(29, 10), 3).unwrap(), q(11, 12));
        assert_eq!(heath_brown_exponent(q(21, 10), 3).unwrap(), q(17, 20));
        assert_eq!(
            exponent_pair_bound(q(1, 9), q(13, 18), q(3, 2)).unwrap(),
            q(7, 9)
        );
        assert_eq!(
            exponent_pair_bound(Q::from_integer(0), q(1, 2), q(3, 2)).unwrap(),
            q(1, 2)
        );
    }

    #[test]
    fn knee_continuity() {
        // Both sides of {α} = 2/(d+1) give the same value.
        for d in 3..8u32 {
            let di = d as i64;
            let a = Q::from_integer(di - 1) + q(2, di + 1);
            let left = one() - (one() - q(2, di + 1)) / (di * (di - 1));
            assert_eq!(heath_brown_exponent(a, d).unwrap(), left);
            assert_eq!(left, one() - q(1, di * (di + 1)));
        }
    }

    #[test]
    fn table_intervals_ordered() {
        for r in bound_table().unwrap() {
            assert!(r.value.lower() <= r.value.upper(), "{}", r.name);
        }
        for d in 2..20 {
            let v = oblique_interval(d).unwrap();
            assert!(v.lower() < v.upper());
        }
    }
}
