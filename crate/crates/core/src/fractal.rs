//! Box-counting dimension, oscillation Hölder exponent and dyadic-block Besov
//! profiles of sampled periodic functions.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft;
use crate::fit::{log_log_fit, ExponentFit};
use crate::linesum::grid_norm;
use crate::math;

pub const MIN_SAMPLES: usize = 1 << 12;
/// Scales dropped at each end of the default fit window.
pub const EDGE_SCALES: usize = 2;

/// Levels kept clear of a known band limit: a truncated series looks smooth
/// below roughly `2^6` times its shortest wavelength.
pub const BAND_MARGIN: usize = 6;
/// Coarsest Hölder level; wider windows saturate at the full range.
pub const HOLDER_COARSEST: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowFit {
    pub eps_max: f64,
    pub eps_min: f64,
    pub dimension: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxCountResult {
    /// `ε = 2^{-k}`, `k = 1..=log2(len)`, decreasing.
    pub eps_list: Vec<f64>,
    /// Boxes `Σ_i (⌈osc_i/ε⌉ + 1)` over columns of width `ε`.
    pub counts: Vec<u64>,
    /// `Σ_i osc_i/ε`, the quantity whose growth is fitted.
    pub variation: Vec<f64>,
    /// Fit over the central window; `slope` is the dimension.
    pub fit: ExponentFit,
    /// Levels `(k_min, k_max)` of the central window.
    pub window: (usize, usize),
    /// Central, coarse-half and fine-half windows.
    pub windows: Vec<WindowFit>,
    /// The function had zero oscillation.
    pub flat: bool,
}

impl BoxCountResult {
    pub fn dimension(&self) -> f64 {
        self.fit.slope
    }
}

fn check_samples(values: &[f64]) -> Result<()> {
    if values.len() < MIN_SAMPLES || !values.len().is_power_of_two() {
        return Err(Error::Domain("need a power-of-two sample count of at least 2^12".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("samples must be finite".into()));
    }
    Ok(())
}

fn range(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

fn flat_fit(scales: Vec<f64>, slope: f64) -> ExponentFit {
    ExponentFit {
        slope,
        intercept: 0.0,
        stderr: 0.0,
        r_squared: 1.0,
        scales,
    }
}

fn floor_log2(x: u128) -> usize {
    127 - x.leading_zeros() as usize
}

fn clip_to_band(hi: usize, band: Option<u128>) -> usize {
    match band {
        Some(b) if b > 0 => hi.min(floor_log2(b).saturating_sub(BAND_MARGIN)),
        _ => hi,
    }
}

/// Default box-count levels: drop the two coarsest and two finest `ε`, and
/// stay [`BAND_MARGIN`] levels above the band limit when it is known.
pub fn box_window(len: usize, band: Option<u128>) -> (usize, usize) {
    let levels = len.trailing_zeros() as usize;
    (1 + EDGE_SCALES, clip_to_band(levels - EDGE_SCALES, band))
}

pub fn holder_window(len: usize, band: Option<u128>) -> (usize, usize) {
    let levels = len.trailing_zeros() as usize;
    (HOLDER_COARSEST, clip_to_band(levels - EDGE_SCALES, band))
}

/// Column-oscillation box count of the graph of `values` over one period,
/// rescaled to the unit square. Column `i` at scale `ε` covers samples
/// `iw..=(i+1)w` (periodically), so neighbouring columns share an endpoint.
pub fn box_dimension(values: &[f64]) -> Result<BoxCountResult> {
    box_dimension_window(values, box_window(values.len(), None))
}

/// [`box_dimension`] for samples of a series with frequencies `|m| ≤ band`.
pub fn box_dimension_band(values: &[f64], band: u128) -> Result<BoxCountResult> {
    box_dimension_window(values, box_window(values.len(), Some(band)))
}

/// [`box_dimension`] fitted over `ε = 2^{-k}`, `k_min ≤ k ≤ k_max`.
pub fn box_dimension_window(values: &[f64], (k_min, k_max): (usize, usize)) -> Result<BoxCountResult> {
    check_samples(values)?;
    let len = values.len();
    let levels = len.trailing_zeros() as usize;
    if k_min < 1 || k_max > levels || k_max < k_min + 3 {
        return Err(Error::Domain(format!(
            "box-count window {k_min}..={k_max} needs at least 4 of the levels 1..={levels}"
        )));
    }
    let (lo, hi) = range(values);
    let flat = hi - lo == 0.0;
    let scale = if flat { 1.0 } else { 1.0 / (hi - lo) };

    let mut eps_list = Vec::with_capacity(levels);
    let mut counts = Vec::with_capacity(levels);
    let mut variation = Vec::with_capacity(levels);
    for k in 1..=levels {
        let cols = 1usize << k;
        let w = len / cols;
        let eps = 1.0 / cols as f64;
        let mut total: u64 = 0;
        let mut var = 0.0;
        for i in 0..cols {
            let mut cmin = f64::INFINITY;
            let mut cmax = f64::NEG_INFINITY;
            for j in i * w..=(i + 1) * w {
                let v = values[j % len];
                cmin = cmin.min(v);
                cmax = cmax.max(v);
            }
            let osc = (cmax - cmin) * scale / eps;
            total += math::ceil(osc) as u64 + 1;
            var += osc;
        }
        eps_list.push(eps);
        counts.push(total);
        variation.push(var);
    }
    let (a, b) = (k_min - 1, k_max);
    if flat {
        let scales = eps_list[a..b].iter().map(|e| 1.0 / e).collect();
        return Ok(BoxCountResult {
            eps_list,
            counts,
            variation,
            fit: flat_fit(scales, 1.0),
            window: (k_min, k_max),
            windows: Vec::new(),
            flat: true,
        });
    }
    let pairs: Vec<(f64, f64)> = eps_list
        .iter()
        .zip(&variation)
        .map(|(&e, &v)| (1.0 / e, v))
        .collect();
    let fit = log_log_fit(&pairs[a..b])?;
    let mid = (a + b) / 2;
    let mut windows = Vec::with_capacity(3);
    for (lo, hi) in [(a, b), (a, (mid + 1).max(a + 3)), ((mid - 1).min(b - 3), b)] {
        let f = log_log_fit(&pairs[lo..hi])?;
        windows.push(WindowFit {
            eps_max: eps_list[lo],
            eps_min: eps_list[hi - 1],
            dimension: f.slope,
            stderr: f.stderr,
        });
    }
    Ok(BoxCountResult {
        eps_list,
        counts,
        variation,
        fit,
        window: (k_min, k_max),
        windows,
        flat: false,
    })
}

/// Largest oscillation over periodic windows of `w + 1` consecutive samples.
pub fn max_window_oscillation(values: &[f64], w: usize) -> f64 {
    let len = values.len();
    let at = |j: usize| values[j % len];
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best: f64 = 0.0;
    for j in 0..len + w {
        let v = at(j);
        while maxq.back().is_some_and(|&b| at(b) <= v) {
            maxq.pop_back();
        }
        maxq.push_back(j);
        while minq.back().is_some_and(|&b| at(b) >= v) {
            minq.pop_back();
        }
        minq.push_back(j);
        if j >= w {
            let start = j - w;
            while maxq.front().is_some_and(|&f| f < start) {
                maxq.pop_front();
            }
            while minq.front().is_some_and(|&f| f < start) {
                minq.pop_front();
            }
            best = best.max(at(maxq[0]) - at(minq[0]));
        }
    }
    best
}

/// Slope of `log sup_|x−y|≤δ |f(x)−f(y)|` against `log δ` for dyadic `δ`
/// (in units of the period), reported at most 1.
pub fn holder_exponent(values: &[f64]) -> Result<ExponentFit> {
    holder_exponent_window(values, holder_window(values.len(), None))
}

pub fn holder_exponent_band(values: &[f64], band: u128) -> Result<ExponentFit> {
    holder_exponent_window(values, holder_window(values.len(), Some(band)))
}

pub fn holder_exponent_window(values: &[f64], (k_min, k_max): (usize, usize)) -> Result<ExponentFit> {
    check_samples(values)?;
    let len = values.len();
    let levels = len.trailing_zeros() as usize;
    if k_min < 1 || k_max > levels || k_max < k_min + 3 {
        return Err(Error::Domain(format!(
            "Hölder window {k_min}..={k_max} needs at least 4 of the levels 1..={levels}"
        )));
    }
    let (lo, hi) = range(values);
    let scales: Vec<f64> = (k_min..=k_max).map(|k| 1.0 / (1u64 << k) as f64).collect();
    if hi - lo == 0.0 {
        return Ok(flat_fit(scales, 1.0));
    }
    let pairs: Vec<(f64, f64)> = (k_min..=k_max)
        .map(|k| {
            let w = len >> k;
            (w as f64 / len as f64, max_window_oscillation(values, w))
        })
        .collect();
    let mut fit = log_log_fit(&pairs)?;
    fit.slope = fit.slope.min(1.0);
    Ok(fit)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BesovProfile {
    /// Dyadic `N`; block `N` holds frequencies `N ≤ |m| < 2N`.
    pub scales: Vec<u64>,
    pub ps: Vec<f64>,
    /// `norms[i][j] = ‖P_{scales[j]} f‖_{ps[i]}` under the normalized measure.
    pub norms: Vec<Vec<f64>>,
    /// `gamma[i]`: decay exponent of the `ps[i]` block norms (`None` if
    /// fewer than four nonzero blocks).
    pub gamma: Vec<Option<ExponentFit>>,
}

impl BesovProfile {
    pub fn gamma_for(&self, p: f64) -> Option<f64> {
        let i = self.ps.iter().position(|&q| q == p)?;
        self.gamma[i].as_ref().map(|f| -f.slope)
    }
}

/// Block norms for `N = 1, 2, 4, …, len/8` with hard frequency cutoffs; the
/// decay fits use `N ≥ 4`.
pub fn besov_profile(samples: &[Complex64], ps: &[f64]) -> Result<BesovProfile> {
    let len = samples.len();
    besov_profile_range(samples, ps, 4, (len / 8) as u64)
}

pub fn besov_profile_range(samples: &[Complex64], ps: &[f64], fit_min: u64, fit_max: u64) -> Result<BesovProfile> {
    let len = samples.len();
    if len < MIN_SAMPLES || !len.is_power_of_two() {
        return Err(Error::Domain("need a power-of-two sample count of at least 2^12".into()));
    }
    let fft = Fft::new(len);
    let mut coef = samples.to_vec();
    fft.forward(&mut coef);
    let inv_len = 1.0 / len as f64;
    for c in coef.iter_mut() {
        *c *= inv_len;
    }
    let mut scales = Vec::new();
    let mut norms = vec![Vec::new(); ps.len()];
    let mut n = 1usize;
    while n <= len / 8 {
        let mut block = vec![Complex64::new(0.0, 0.0); len];
        for m in n..2 * n {
            block[m] = coef[m];
            block[len - m] = coef[len - m];
        }
        fft.inverse(&mut block);
        for (i, &p) in ps.iter().enumerate() {
            norms[i].push(grid_norm(&block, p));
        }
        scales.push(n as u64);
        n *= 2;
    }
    let gamma = norms
        .iter()
        .map(|row| {
            let pairs: Vec<(f64, f64)> = scales
                .iter()
                .zip(row)
                .filter(|(&s, &v)| s >= fit_min && s <= fit_max && v > 1e-300)
                .map(|(&s, &v)| (s as f64, v))
                .collect();
            if pairs.len() < 4 {
                None
            } else {
                log_log_fit(&pairs).ok()
            }
        })
        .collect();
    Ok(BesovProfile {
        scales,
        ps: ps.to_vec(),
        norms,
        gamma,
    })
}

/// `W(x) = Σ_{j=0}^{terms−1} 2^{−jγ} cos(2^j x)` on `len` points of `[0, 2π)`.
pub fn weierstrass(gamma: f64, terms: u32, len: usize) -> Vec<f64> {
    let mut out = vec![0.0; len];
    for j in 0..terms {
        let a = math::powf(2.0, -(j as f64) * gamma);
        let f = 1u64 << j;
        for (i, v) in out.iter_mut().enumerate() {
            // Reduce 2^j·i modulo len before scaling to keep the argument small.
            let r = ((f as u128 * i as u128) % len as u128) as f64;
            *v += a * math::sin_cos(core::f64::consts::TAU * r / len as f64).1;
        }
    }
    out
}

/// `2 − (2r − γq′)/(2 − q′)` with `q′ = q/(q−1)` (`q = ∞` gives `q′ = 1`).
pub fn dimension_lower_bound(r: f64, gamma: f64, q: f64) -> Result<f64> {
    if !(r > 0.0) || !(0.0..=0.5).contains(&gamma) || !(q > 2.0) {
        return Err(Error::Domain("need r > 0, 0 <= gamma <= 1/2, q > 2".into()));
    }
    let qp = if q.is_infinite() { 1.0 } else { q / (q - 1.0) };
    Ok(2.0 - (2.0 * r - gamma * qp) / (2.0 - qp))
}

/// `2 − γ`.
pub fn dimension_upper_bound(gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Domain("need 0 < gamma <= 1".into()));
    }
    Ok(2.0 - gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEN: usize = 1 << 14;

    fn sine() -> Vec<f64> {
        (0..LEN)
            .map(|j| math::sin_cos(core::f64::consts::TAU * j as f64 / LEN as f64).0)
            .collect()
    }

    fn step() -> Vec<f64> {
        (0..LEN).map(|j| if j < LEN / 2 { 1.0 } else { 0.0 }).collect()
    }

    #[test]
    fn smooth_and_step_graphs_have_dimension_one() {
        assert!((box_dimension(&sine()).unwrap().dimension() - 1.0).abs() < 0.05);
        assert!((box_dimension(&step()).unwrap().dimension() - 1.0).abs() < 0.05);
    }

    #[test]
    fn affine_invariance() {
        let w = weierstrass(0.5, 12, LEN);
        let a: Vec<f64> = w.iter().map(|v| -3.0 * v + 7.0).collect();
        let (bw, ba) = (box_dimension(&w).unwrap(), box_dimension(&a).unwrap());
        assert_eq!(bw.counts, ba.counts);
        assert!((bw.dimension() - ba.dimension()).abs() < 1e-12);
    }

    #[test]
    fn flat_function_is_flagged() {
        let r = box_dimension(&vec![2.0; LEN]).unwrap();
        assert!(r.flat && r.dimension() == 1.0);
    }

    #[test]
    fn holder_examples() {
        assert!(holder_exponent(&sine()).unwrap().slope >= 0.95);
        assert!(holder_exponent(&step()).unwrap().slope.abs() < 0.05);
    }

    #[test]
    fn window_oscillation_matches_brute_force() {
        let v: Vec<f64> = (0..64).map(|j| ((j * 37) % 23) as f64).collect();
        for w in [1, 3, 8] {
            let mut best: f64 = 0.0;
            for s in 0..64 {
                let win: Vec<f64> = (s..=s + w).map(|j| v[j % 64]).collect();
                let (lo, hi) = range(&win);
                best = best.max(hi - lo);
            }
            assert_eq!(max_window_oscillation(&v, w), best);
        }
    }

    #[test]
    fn single_mode_has_single_block() {
        let s: Vec<Complex64> = (0..LEN)
            .map(|j| crate::turns::Turns::from_ratio(5 * j as i128, LEN as u64).unit())
            .collect();
        let prof = besov_profile(&s, &[2.0]).unwrap();
        for (n, v) in prof.scales.iter().zip(&prof.norms[0]) {
            if *n == 4 {
                assert!((v - 1.0).abs() < 1e-12);
            } else {
                assert!(*v <= 1e-10, "N = {n}: {v}");
            }
        }
    }

    #[test]
    fn bound_formulas() {
        assert!((dimension_lower_bound(0.5, 0.5, 4.0).unwrap() - 1.5).abs() < 1e-15);
        assert!((dimension_lower_bound(0.25, 0.25, 4.0).unwrap() - 1.75).abs() < 1e-15);
        assert!((dimension_lower_bound(0.5, 0.0, f64::INFINITY).unwrap() - 1.0).abs() < 1e-15);
        assert!((dimension_upper_bound(0.1).unwrap() - 1.9).abs() < 1e-15);
    }
}
