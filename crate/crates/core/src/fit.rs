//! Deterministic summation and least-squares line fits.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;

/// Pairwise (tree) sum; the reduction shape depends only on the length.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope; zero when there are only two points.
    pub stderr: f64,
    pub r_squared: f64,
}

pub fn line_fit(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return Err(Error::DegenerateFit);
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(Error::DegenerateFit);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = if n > 2 {
        math::sqrt(sse / (nf - 2.0) / sxx)
    } else {
        0.0
    };
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(LineFit {
        slope,
        intercept,
        stderr,
        r_squared,
    })
}

/// Slope of `log2 value` against `log2 scale`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub r_squared: f64,
    pub scales: Vec<f64>,
}

/// Least-squares exponent over at least four `(scale, value)` pairs.
pub fn fit_exponent(pairs: &[(f64, f64)]) -> Result<ExponentFit> {
    if pairs.len() < 4 {
        return Err(Error::DegenerateFit);
    }
    log_log_fit(pairs)
}

/// Same as [`fit_exponent`] without the four-scale minimum.
pub fn log_log_fit(pairs: &[(f64, f64)]) -> Result<ExponentFit> {
    if pairs.iter().any(|&(s, v)| !(s > 0.0) || !(v > 0.0)) {
        return Err(Error::Domain("log-log fit needs positive scales and values".into()));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| math::log2(p.0)).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| math::log2(p.1)).collect();
    let f = line_fit(&xs, &ys)?;
    Ok(ExponentFit {
        slope: f.slope,
        intercept: f.intercept,
        stderr: f.stderr,
        r_squared: f.r_squared,
        scales: pairs.iter().map(|p| p.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let lin: Vec<_> = (4..10).map(|k| ((1u64 << k) as f64, (1u64 << k) as f64)).collect();
        let f = fit_exponent(&lin).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-14 && f.stderr < 1e-12);
        let root: Vec<_> = (4..10)
            .map(|k| ((1u64 << k) as f64, math::sqrt((1u64 << k) as f64)))
            .collect();
        assert!((fit_exponent(&root).unwrap().slope - 0.5).abs() < 1e-14);
    }

    #[test]
    fn equal_scales_are_degenerate() {
        let p = [(8.0, 1.0), (8.0, 2.0), (8.0, 3.0), (8.0, 4.0)];
        assert_eq!(fit_exponent(&p), Err(Error::DegenerateFit));
        assert_eq!(fit_exponent(&p[..3]), Err(Error::DegenerateFit));
    }

    #[test]
    fn pairwise_sum_of_ones() {
        let v = alloc::vec![1.0; 1000];
        assert_eq!(pairwise_sum(&v), 1000.0);
    }
}
