//! Trigonometric sums `S(y) = Σ a_k e^{i m_k y}` with integer frequencies.
//!
//! Every slice through a dispersive evolution with integer `ω` reduces to this
//! form. On the grid `y_j = 2πj/G` only `m_k mod G` matters, so folding the
//! amplitudes into `G` bins and running one inverse FFT gives the exact grid
//! values in `O(K + G log G)`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::fft::Fft;
use crate::fit::pairwise_sum_complex;
use crate::turns::Turns;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrigSum {
    amps: Vec<Complex64>,
    freqs: Vec<i128>,
}

impl TrigSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            amps: Vec::with_capacity(n),
            freqs: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, amp: Complex64, freq: i128) {
        self.amps.push(amp);
        self.freqs.push(freq);
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn freqs(&self) -> &[i128] {
        &self.freqs
    }

    /// `max |m_k|` (0 when empty).
    pub fn band(&self) -> u128 {
        self.freqs.iter().map(|m| m.unsigned_abs()).max().unwrap_or(0)
    }

    /// `Σ|a_k|`, an upper bound for `|S|`.
    pub fn l1(&self) -> f64 {
        self.amps.iter().map(|a| a.norm()).sum()
    }

    /// `S(2πj/G)` for `j < G`; `G` must be a power of two.
    pub fn eval_grid(&self, g: usize) -> Vec<Complex64> {
        let mut bins = vec![Complex64::new(0.0, 0.0); g];
        let gi = g as i128;
        for (a, m) in self.amps.iter().zip(&self.freqs) {
            bins[m.rem_euclid(gi) as usize] += a;
        }
        Fft::new(g).inverse(&mut bins);
        bins
    }

    /// `S(2π·y)` by direct summation with exact phase reduction.
    pub fn eval_at(&self, y: Turns) -> Complex64 {
        let terms: Vec<Complex64> = self
            .amps
            .iter()
            .zip(&self.freqs)
            .map(|(a, &m)| a * y.mul_int(m).unit())
            .collect();
        pairwise_sum_complex(&terms)
    }

    /// Maximum of `|S|` after golden-section refinement around the `top`
    /// largest local maxima of the grid values.
    pub fn refine_sup(&self, grid: &[Complex64], top: usize, iters: usize) -> f64 {
        let g = grid.len();
        let mags: Vec<f64> = grid.iter().map(|v| v.norm()).collect();
        let grid_sup = mags.iter().copied().fold(0.0, f64::max);
        let mut peaks: Vec<usize> = (0..g)
            .filter(|&j| {
                let l = mags[(j + g - 1) % g];
                let r = mags[(j + 1) % g];
                mags[j] >= l && mags[j] >= r
            })
            .collect();
        peaks.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]).then(a.cmp(&b)));
        peaks.truncate(top);
        let mut best = grid_sup;
        for j in peaks {
            best = best.max(self.golden_max(j, g, iters));
        }
        best
    }

    fn golden_max(&self, j: usize, g: usize, iters: usize) -> f64 {
        let base = Turns::from_ratio(j as i128, g as u64);
        let at = |off: f64| {
            let y = base + Turns::from_dd(DoubleDouble::from_f64(off).div_f64(g as f64));
            self.eval_at(y).norm()
        };
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let (mut a, mut b) = (-1.0f64, 1.0f64);
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let (mut fc, mut fd) = (at(c), at(d));
        let mut best = fc.max(fd);
        for _ in 0..iters {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = at(c);
                best = best.max(fc);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = at(d);
                best = best.max(fd);
            }
        }
        best
    }
}

/// `((1/G)Σ|v_j|^p)^{1/p}`; `p = ∞` gives the maximum.
pub fn grid_norm(values: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let terms: Vec<f64> = values.iter().map(|v| crate::math::powf(v.norm(), p)).collect();
    let mean = crate::fit::pairwise_sum(&terms) / values.len() as f64;
    crate::math::powf(mean, 1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_matches_direct() {
        let mut s = TrigSum::new();
        for k in 0..40i128 {
            s.push(Complex64::new(1.0 / (k + 1) as f64, 0.3), k * k - 7 * k);
        }
        let g = 64;
        let grid = s.eval_grid(g);
        for (j, v) in grid.iter().enumerate() {
            let d = s.eval_at(Turns::from_ratio(j as i128, g as u64));
            assert!((v - d).norm() < 1e-12, "j = {j}");
        }
    }

    #[test]
    fn refinement_never_lowers_the_grid_sup() {
        let mut s = TrigSum::new();
        for k in 100..200i128 {
            s.push(Complex64::new(1.0, 0.0), k * k);
        }
        let grid = s.eval_grid(256);
        let gs = grid_norm(&grid, f64::INFINITY);
        assert!(s.refine_sup(&grid, 10, 30) >= gs);
    }
}
