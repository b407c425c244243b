//! Truncated solutions `q(t,x) = Σ_{|n|≤M} ĝ(n) e^{i(tω(n)+nx)}` sampled along
//! horizontal, vertical and rational-slope oblique lines, and Talbot
//! quantization at rational times.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::diophantine::gcd;
use crate::dispersion::{phase, DispersionRelation, HighPrecisionTime, OmegaValue};
use crate::error::{Error, Result};
use crate::fit::pairwise_sum_complex;
use crate::initial_data::{CoefficientSource, StepFunction};
use crate::linesum::TrigSum;
use crate::turns::Turns;

pub const DEFAULT_TRUNCATION: usize = 1 << 14;
pub const MAX_TRUNCATION: usize = 1 << 18;

#[derive(Clone, Debug, PartialEq)]
pub enum SliceSpec {
    /// Fixed time, `x ∈ [0, 2π)`.
    Horizontal { t: HighPrecisionTime },
    /// Fixed `x0`, `t ∈ [t0, t1)` (radians).
    Vertical {
        x0: Turns,
        t0: DoubleDouble,
        t1: DoubleDouble,
    },
    /// `f(x) = q(c − (k/ℓ)x, x)` for `x ∈ [0, 2πℓ)`; `c` stored as `c/2π`.
    Oblique { c: HighPrecisionTime, k: u64, l: u64 },
}

impl SliceSpec {
    pub fn oblique(c: HighPrecisionTime, k: u64, l: u64) -> Result<Self> {
        if k == 0 || l == 0 || gcd(k as i128, l as i128) != 1 {
            return Err(Error::Domain("oblique slope k/l needs coprime positive k, l".into()));
        }
        Ok(SliceSpec::Oblique { c, k, l })
    }

    /// Length of the sampled parameter interval, in radians.
    pub fn period(&self) -> f64 {
        match self {
            SliceSpec::Horizontal { .. } => core::f64::consts::TAU,
            SliceSpec::Vertical { t0, t1, .. } => (*t1 - *t0).to_f64(),
            SliceSpec::Oblique { l, .. } => core::f64::consts::TAU * *l as f64,
        }
    }

    pub fn start(&self) -> f64 {
        match self {
            SliceSpec::Vertical { t0, .. } => t0.to_f64(),
            _ => 0.0,
        }
    }

    pub fn spec_string(&self) -> String {
        match self {
            SliceSpec::Horizontal { t } => format!("horiz:{}", t.spec_string()),
            SliceSpec::Vertical { x0, t0, t1 } => {
                format!("vert:{}:{},{}", x0.radians(), t0.to_f64(), t1.to_f64())
            }
            SliceSpec::Oblique { c, k, l } => format!("obliq:{}:{k}/{l}", c.spec_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub relation: String,
    pub datum: String,
    pub slice: String,
    pub time: String,
}

/// Uniform samples `samples[j] = f(start + j·period/len)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleGrid {
    pub samples: Vec<Complex64>,
    pub start: f64,
    pub period: f64,
    pub truncation: usize,
    /// Largest `|frequency|` in the slice parameter, when it is an integer.
    pub band: Option<u128>,
    pub provenance: Provenance,
}

impl SampleGrid {
    /// Samples of a plain function over `[0, period)`, for estimator tests.
    pub fn from_fn(len: usize, period: f64, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = (0..len).map(|j| f(period * j as f64 / len as f64)).collect();
        Self {
            samples,
            start: 0.0,
            period,
            truncation: 0,
            band: None,
            provenance: Provenance {
                relation: String::new(),
                datum: String::from("function"),
                slice: String::new(),
                time: String::new(),
            },
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn real_part(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.re).collect()
    }

    pub fn imag_part(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.im).collect()
    }

    pub fn position(&self, j: usize) -> f64 {
        self.start + self.period * j as f64 / self.len() as f64
    }
}

fn integer_omega(rel: &DispersionRelation, n: i128) -> Result<i128> {
    match rel.omega_value(n)? {
        OmegaValue::Integer(w) => Ok(w),
        OmegaValue::Real(_) => Err(Error::UnsupportedSlice(format!(
            "{} is not integer valued; only horizontal slices are available",
            rel.spec_string()
        ))),
    }
}

/// Write the slice restriction of `Σ c_n e^{i(tω(n)+nx)}` as a [`TrigSum`]
/// in the slice parameter `y ∈ [0, 2π)` (`x = ℓy` on oblique lines, `t = y`
/// on vertical ones).
pub fn slice_terms(
    rel: &DispersionRelation,
    slice: &SliceSpec,
    modes: &[(i128, Complex64)],
) -> Result<TrigSum> {
    let mut s = TrigSum::with_capacity(modes.len());
    for &(n, c) in modes {
        match slice {
            SliceSpec::Horizontal { t } => {
                let p = phase(rel, n, t, Turns::ZERO)?;
                s.push(c * p.unit(), n);
            }
            SliceSpec::Oblique { c: c0, k, l } => {
                let w = integer_omega(rel, n)?;
                let m = (*l as i128)
                    .checked_mul(n)
                    .and_then(|a| (*k as i128).checked_mul(w).and_then(|b| a.checked_sub(b)))
                    .ok_or(Error::Overflow { n })?;
                s.push(c * c0.times_integer(w).unit(), m);
            }
            SliceSpec::Vertical { x0, .. } => {
                let w = integer_omega(rel, n)?;
                s.push(c * x0.mul_int(n).unit(), w);
            }
        }
    }
    Ok(s)
}

/// `(n, ĝ(n))` for `|n| ≤ M`.
pub fn truncated_modes<S: CoefficientSource + ?Sized>(g: &S, m: usize) -> Vec<(i128, Complex64)> {
    let m = m as i128;
    (-m..=m).map(|n| (n, g.coefficient(n))).collect()
}

pub fn evolve_slice<S: CoefficientSource + ?Sized>(
    rel: &DispersionRelation,
    g: &S,
    datum_label: &str,
    slice: &SliceSpec,
    m: usize,
    len: usize,
) -> Result<SampleGrid> {
    if m > MAX_TRUNCATION {
        return Err(Error::Domain(format!("truncation {m} exceeds 2^18")));
    }
    if !len.is_power_of_two() {
        return Err(Error::Domain("sample count must be a power of two".into()));
    }
    let modes = truncated_modes(g, m);
    evolve_modes(rel, &modes, datum_label, slice, m, len)
}

/// [`evolve_slice`] with explicit `(n, coefficient)` pairs.
pub fn evolve_modes(
    rel: &DispersionRelation,
    modes: &[(i128, Complex64)],
    datum_label: &str,
    slice: &SliceSpec,
    m: usize,
    len: usize,
) -> Result<SampleGrid> {
    let mut band = None;
    let samples = match slice {
        SliceSpec::Vertical { x0, t0, t1 } => {
            let ts: Vec<DoubleDouble> = (0..len)
                .map(|j| *t0 + (*t1 - *t0).mul_f64(j as f64 / len as f64))
                .collect();
            if rel.is_integer_valued() {
                let terms = slice_terms(rel, slice, modes)?;
                ts.iter()
                    .map(|t| terms.eval_at(Turns::from_radians_dd(*t)))
                    .collect()
            } else {
                let mut out = Vec::with_capacity(len);
                for t in &ts {
                    let time = HighPrecisionTime::from_t(*t);
                    let terms: Result<Vec<Complex64>> = modes
                        .iter()
                        .map(|&(n, c)| Ok(c * phase(rel, n, &time, *x0)?.unit()))
                        .collect();
                    out.push(pairwise_sum_complex(&terms?));
                }
                out
            }
        }
        _ => {
            let terms = slice_terms(rel, slice, modes)?;
            band = Some(terms.band());
            terms.eval_grid(len)
        }
    };
    let time = match slice {
        SliceSpec::Horizontal { t } => t.spec_string(),
        SliceSpec::Oblique { c, .. } => format!("c/2pi = {}", c.spec_string()),
        SliceSpec::Vertical { .. } => String::from("range"),
    };
    Ok(SampleGrid {
        samples,
        start: slice.start(),
        period: slice.period(),
        truncation: m,
        band,
        provenance: Provenance {
            relation: rel.spec_string(),
            datum: String::from(datum_label),
            slice: slice.spec_string(),
            time,
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Quantization {
    /// `c_m` for `m = 0..q`: `u = Σ c_m g(x − 2πm/q)`.
    pub coefficients: Vec<Complex64>,
    pub function: StepFunction,
}

impl Quantization {
    /// `|Σ|c_m|² − 1|`.
    pub fn unitarity_error(&self) -> f64 {
        (self.coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>() - 1.0).abs()
    }
}

/// Solution at `t/2π = a/q` as a combination of translates of `g`, with
/// `c_m = (1/q) Σ_{j mod q} e^{2πi(aω(j) + jm)/q}`.
pub fn quantize_reconstruct(
    rel: &DispersionRelation,
    g: &StepFunction,
    a: i128,
    q: u64,
) -> Result<Quantization> {
    let poly = rel
        .as_polynomial()
        .ok_or_else(|| Error::Domain("quantization needs an integer polynomial relation".into()))?;
    if q == 0 || q > 1 << 20 || gcd(a, q as i128) != 1 {
        return Err(Error::Domain("quantization needs 1 <= q <= 2^20 and gcd(a, q) = 1".into()));
    }
    let qi = q as i128;
    let a_mod = a.rem_euclid(qi);
    let res: Vec<i128> = (0..qi)
        .map(|j| (a_mod * poly.eval_mod(j, q) as i128) % qi)
        .collect();
    let coefficients: Vec<Complex64> = (0..qi)
        .map(|m| {
            let terms: Vec<Complex64> = (0..qi)
                .map(|j| Turns::from_ratio(res[j as usize] + (j * m) % qi, q).unit())
                .collect();
            pairwise_sum_complex(&terms) / q as f64
        })
        .collect();
    // Snap rounding noise so vanishing weights drop their breakpoints.
    let cleaned: Vec<Complex64> = coefficients
        .iter()
        .map(|c| {
            let snap = |v: f64| if v.abs() < 1e-13 { 0.0 } else { v };
            Complex64::new(snap(c.re), snap(c.im))
        })
        .collect();
    let function = g.translate_combination(qi, &cleaned)?;
    Ok(Quantization {
        coefficients,
        function,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantizeCheck {
    /// Max `|series − reconstruction|` at grid points away from jumps.
    pub deviation: f64,
    pub points_compared: usize,
    pub unitarity_error: f64,
}

/// Off-jump exclusion radius, in turns (2π/64 radians).
pub const OFF_JUMP_RADIUS: f64 = 1.0 / 64.0;

pub fn quantize_verify(
    rel: &DispersionRelation,
    g: &StepFunction,
    a: i128,
    q: u64,
    m: usize,
    len: usize,
) -> Result<QuantizeCheck> {
    let quant = quantize_reconstruct(rel, g, a, q)?;
    let t = HighPrecisionTime::rational(a, q as i128)?;
    let grid = evolve_slice(rel, g, "", &SliceSpec::Horizontal { t }, m, len)?;
    let mut deviation: f64 = 0.0;
    let mut points = 0;
    for (j, v) in grid.samples.iter().enumerate() {
        let x = Turns::from_ratio(j as i128, len as u64);
        if quant.function.distance_to_jump(x) < OFF_JUMP_RADIUS {
            continue;
        }
        points += 1;
        deviation = deviation.max((v - quant.function.value_at(x)).norm());
    }
    Ok(QuantizeCheck {
        deviation,
        points_compared: points,
        unitarity_error: quant.unitarity_error(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn schrodinger() -> DispersionRelation {
        DispersionRelation::monomial(-1, 2)
    }

    #[test]
    fn constant_datum_stays_constant() {
        let g = StepFunction::constant(Complex64::new(3.0, 0.0));
        let t = HighPrecisionTime::from_theta(DoubleDouble::SQRT2);
        for slice in [
            SliceSpec::Horizontal { t },
            SliceSpec::oblique(t, 1, 1).unwrap(),
        ] {
            let s = evolve_slice(&schrodinger(), &g, "c", &slice, 64, 256).unwrap();
            assert!(s.samples.iter().all(|z| (z - Complex64::new(3.0, 0.0)).norm() < 1e-13));
        }
    }

    #[test]
    fn quarter_period_coefficients() {
        let g = StepFunction::half_indicator();
        let qz = quantize_reconstruct(&schrodinger(), &g, 1, 4).unwrap();
        let c = &qz.coefficients;
        assert!((c[0] - Complex64::new(0.5, -0.5)).norm() < 1e-15);
        assert!(c[1].norm() < 1e-15 && c[3].norm() < 1e-15);
        assert!((c[2] - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!(qz.unitarity_error() < 1e-12);
    }

    #[test]
    fn half_period_is_a_translate() {
        let g = StepFunction::half_indicator();
        let qz = quantize_reconstruct(&schrodinger(), &g, 1, 2).unwrap();
        assert!((qz.coefficients[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let u = qz.function;
        assert!(u.value_at(Turns::from_ratio(1, 4)).norm() < 1e-15);
        assert!((u.value_at(Turns::from_ratio(3, 4)) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn revival_matches_datum() {
        let g = StepFunction::half_indicator();
        let chk = quantize_verify(&schrodinger(), &g, 1, 1, 1 << 12, 1 << 12).unwrap();
        assert!(chk.deviation <= 2e-3, "{}", chk.deviation);
        let chk = quantize_verify(&schrodinger(), &g, 1, 2, 1 << 12, 1 << 12).unwrap();
        assert!(chk.deviation <= 2e-3, "{}", chk.deviation);
    }

    #[test]
    fn time_pi_shifts_by_pi() {
        // t = π: θ = 1/2 and e^{−iπn²} = (−1)^n.
        let g = StepFunction::half_indicator();
        let t = HighPrecisionTime::rational(1, 2).unwrap();
        let s = evolve_slice(&schrodinger(), &g, "", &SliceSpec::Horizontal { t }, 2048, 1024).unwrap();
        let x = s.position(768);
        assert!((x - 1.5 * PI).abs() < 1e-12);
        assert!((s.samples[768].re - 1.0).abs() < 2e-3);
        assert!(s.samples[256].norm() < 2e-3);
    }

    #[test]
    fn oblique_at_origin_is_partial_sum() {
        let g = StepFunction::half_indicator();
        let slice = SliceSpec::oblique(HighPrecisionTime::ZERO, 1, 1).unwrap();
        let s = evolve_slice(&schrodinger(), &g, "", &slice, 100, 256).unwrap();
        let direct: Complex64 = (-100..=100).map(|n| g.coefficient(n)).sum();
        assert!((s.samples[0] - direct).norm() < 1e-12);
    }

    #[test]
    fn oblique_needs_integer_relation() {
        let g = StepFunction::half_indicator();
        let slice = SliceSpec::oblique(HighPrecisionTime::ZERO, 1, 1).unwrap();
        let r = evolve_slice(&DispersionRelation::Gravity, &g, "", &slice, 10, 64);
        assert!(matches!(r, Err(Error::UnsupportedSlice(_))));
    }
}
