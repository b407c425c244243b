//! Dyadic block sums `Σ_{N≤n<2N} w(n) e^{i(tω(±n) ± nx)}`, their norms along
//! slices, the L⁴ resonance counter and the stationary-phase dual sum.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::dispersion::{phase, DispersionRelation, HighPrecisionTime};
use crate::error::{Error, Result};
use crate::evolution::{slice_terms, SliceSpec};
use crate::fit::pairwise_sum_complex;
pub use crate::fit::{fit_exponent, ExponentFit};
use crate::linesum::{grid_norm, TrigSum};
use crate::math;
use crate::poly::IntPoly;
use crate::turns::Turns;

pub const MAX_BLOCK: u64 = 1 << 20;
pub const MAX_GRID: usize = 1 << 20;
pub const REFINE_TOP: usize = 10;
pub const REFINE_ITERS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weight {
    Unit,
    /// `1/|n|`.
    Reciprocal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockSpec {
    pub relation: DispersionRelation,
    pub n: u64,
    pub sign: Sign,
    pub weight: Weight,
}

impl BlockSpec {
    pub fn new(relation: DispersionRelation, n: u64, sign: Sign, weight: Weight) -> Result<Self> {
        if !n.is_power_of_two() || n > MAX_BLOCK {
            return Err(Error::Domain(format!("block size {n} must be a power of two <= 2^20")));
        }
        Ok(Self {
            relation,
            n,
            sign,
            weight,
        })
    }

    pub fn unit(relation: DispersionRelation, n: u64) -> Result<Self> {
        Self::new(relation, n, Sign::Plus, Weight::Unit)
    }

    pub fn with_n(&self, n: u64) -> Result<Self> {
        Self::new(self.relation.clone(), n, self.sign, self.weight)
    }

    /// Signed indices `±n`, `N ≤ n < 2N`, with their weights.
    pub fn modes(&self) -> Vec<(i128, Complex64)> {
        let n0 = self.n as i128;
        (n0..2 * n0)
            .map(|n| {
                let w = match self.weight {
                    Weight::Unit => 1.0,
                    Weight::Reciprocal => 1.0 / n as f64,
                };
                let idx = match self.sign {
                    Sign::Plus => n,
                    Sign::Minus => -n,
                };
                (idx, Complex64::new(w, 0.0))
            })
            .collect()
    }

    /// `Σ|w(n)|`.
    pub fn weight_l1(&self) -> f64 {
        self.modes().iter().map(|m| m.1.re).sum()
    }

    pub fn terms(&self, slice: &SliceSpec) -> Result<TrigSum> {
        if matches!(slice, SliceSpec::Vertical { .. }) {
            return Err(Error::UnsupportedSlice("block norms are taken along horizontal or oblique lines".into()));
        }
        slice_terms(&self.relation, slice, &self.modes())
    }
}

pub fn block_sum(spec: &BlockSpec, t: &HighPrecisionTime, x: Turns) -> Result<Complex64> {
    let terms: Result<Vec<Complex64>> = spec
        .modes()
        .into_iter()
        .map(|(n, w)| Ok(w * phase(&spec.relation, n, t, x)?.unit()))
        .collect();
    Ok(pairwise_sum_complex(&terms?))
}

/// Default sup grid: `16N`, capped at 2^20.
pub fn default_grid(n: u64) -> usize {
    ((16 * n) as usize).min(MAX_GRID)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepOptions {
    /// Fixed grid size; `None` uses [`default_grid`] per scale.
    pub grid: Option<usize>,
    pub refine: bool,
    pub top: usize,
    pub iters: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            grid: None,
            refine: true,
            top: REFINE_TOP,
            iters: REFINE_ITERS,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub n: u64,
    pub sup_abs: f64,
    pub grid_sup: f64,
    pub l2: f64,
    pub l4: f64,
    pub grid: usize,
    pub refined: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub fit: ExponentFit,
    pub warnings: Vec<String>,
}

pub fn sweep_row(template: &BlockSpec, slice: &SliceSpec, n: u64, opts: &SweepOptions) -> Result<SweepRow> {
    let spec = template.with_n(n)?;
    let grid = opts.grid.unwrap_or_else(|| default_grid(n));
    if !grid.is_power_of_two() || grid > MAX_GRID {
        return Err(Error::Domain(format!("grid {grid} must be a power of two <= 2^20")));
    }
    let terms = spec.terms(slice)?;
    let values = terms.eval_grid(grid);
    let grid_sup = grid_norm(&values, f64::INFINITY);
    let sup_abs = if opts.refine {
        terms.refine_sup(&values, opts.top, opts.iters)
    } else {
        grid_sup
    };
    Ok(SweepRow {
        n,
        sup_abs,
        grid_sup,
        l2: grid_norm(&values, 2.0),
        l4: grid_norm(&values, 4.0),
        grid,
        refined: opts.refine,
    })
}

/// Sup of the block along `slice` for each scale, and the fitted growth
/// exponent of the sup.
pub fn sup_norm_sweep(
    template: &BlockSpec,
    slice: &SliceSpec,
    scales: &[u64],
    opts: &SweepOptions,
) -> Result<SweepResult> {
    let rows: Result<Vec<SweepRow>> = scales.iter().map(|&n| sweep_row(template, slice, n, opts)).collect();
    finish_sweep(rows?)
}

/// Fit and grid warnings for rows computed elsewhere (e.g. in parallel).
pub fn finish_sweep(rows: Vec<SweepRow>) -> Result<SweepResult> {
    let warnings = rows
        .iter()
        .filter(|r| (r.grid as u64) < 16 * r.n)
        .map(|r| format!("grid {} is coarser than 16N at N = {}", r.grid, r.n))
        .collect();
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.sup_abs)).collect();
    let fit = fit_exponent(&pairs)?;
    Ok(SweepResult { rows, fit, warnings })
}

/// Grid quadrature of `((1/2π)∫|block|^p)^{1/p}` at fixed time; `p` is 2, 4
/// or infinite.
pub fn lp_norm(spec: &BlockSpec, t: &HighPrecisionTime, p: f64, grid: usize) -> Result<f64> {
    if !(p == 2.0 || p == 4.0 || p.is_infinite()) {
        return Err(Error::Domain("p must be 2, 4 or infinity".into()));
    }
    if !grid.is_power_of_two() || grid > MAX_GRID {
        return Err(Error::Domain(format!("grid {grid} must be a power of two <= 2^20")));
    }
    let values = spec.terms(&SliceSpec::Horizontal { t: *t })?.eval_grid(grid);
    Ok(grid_norm(&values, p))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L4Count {
    pub count: u64,
    /// `(n1, n2, n3, n4)` with `h(n1) + h(n3) = h(n2) + h(n4)`.
    pub quadruples: Vec<[i64; 4]>,
}

pub const MAX_L4_K: u64 = 128;

fn h_values(h: &IntPoly, k: u64) -> Result<Vec<i128>> {
    if k == 0 || k > MAX_L4_K {
        return Err(Error::Domain(format!("K = {k} must lie in 1..=128")));
    }
    (k as i128..2 * k as i128)
        .map(|n| h.eval_checked(n).ok_or(Error::Overflow { n }))
        .collect()
}

/// All `n_i ∈ [K, 2K)` with `h(n1) + h(n3) = h(n2) + h(n4)`, solving for
/// `n4` by table lookup (`O(K³)`).
pub fn l4_quadruple_oracle(h: &IntPoly, k: u64) -> Result<L4Count> {
    let vals = h_values(h, k)?;
    let base = k as i64;
    let mut by_value: BTreeMap<i128, Vec<i64>> = BTreeMap::new();
    for (i, v) in vals.iter().enumerate() {
        by_value.entry(*v).or_default().push(base + i as i64);
    }
    let mut quadruples = Vec::new();
    for (i1, v1) in vals.iter().enumerate() {
        for (i2, v2) in vals.iter().enumerate() {
            for (i3, v3) in vals.iter().enumerate() {
                let target = v1 - v2 + v3;
                if let Some(ns) = by_value.get(&target) {
                    for &n4 in ns {
                        quadruples.push([
                            base + i1 as i64,
                            base + i2 as i64,
                            base + i3 as i64,
                            n4,
                        ]);
                    }
                }
            }
        }
    }
    Ok(L4Count {
        count: quadruples.len() as u64,
        quadruples,
    })
}

/// Same count by checking every quadruple (`O(K⁴)`).
pub fn l4_quadruple_count_naive(h: &IntPoly, k: u64) -> Result<u64> {
    let vals = h_values(h, k)?;
    let mut count = 0;
    for v1 in &vals {
        for v2 in &vals {
            for v3 in &vals {
                for v4 in &vals {
                    if v1 + v3 == v2 + v4 {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryL4Check {
    /// `(1/G)Σ|S(x_j)|⁴`.
    pub quadrature: f64,
    /// Triple sum of `e^{3it(n1−n2)(n2−n3)(n1+n3)}`.
    pub triple_sum: Complex64,
    pub relative_error: f64,
}

/// Compare the normalized L⁴ quadrature of `Σ_{N≤n<2N} e^{i(tn³+nx)}` with
/// the resonance expansion over `n4 = n1 − n2 + n3`.
pub fn airy_l4_identity_check(t: &HighPrecisionTime, n: u64, grid: usize) -> Result<AiryL4Check> {
    if (grid as u64) <= 16 * n {
        return Err(Error::Domain("grid must exceed 16N".into()));
    }
    let spec = BlockSpec::unit(DispersionRelation::monomial(1, 3), n)?;
    let q = lp_norm(&spec, t, 4.0, grid)?;
    let quadrature = q * q * q * q;
    let (lo, hi) = (n as i128, 2 * n as i128);
    let mut terms = Vec::with_capacity((n * n * n) as usize);
    for n1 in lo..hi {
        for n2 in lo..hi {
            for n3 in lo..hi {
                let n4 = n1 - n2 + n3;
                if n4 < lo || n4 >= hi {
                    continue;
                }
                let r = 3 * (n1 - n2) * (n2 - n3) * (n1 + n3);
                terms.push(t.times_integer(r).unit());
            }
        }
    }
    let triple_sum = pairwise_sum_complex(&terms);
    Ok(AiryL4Check {
        quadrature,
        triple_sum,
        relative_error: (Complex64::new(quadrature, 0.0) - triple_sum).norm() / quadrature,
    })
}

/// Budget constant for the dual-sum discrepancy.
pub const BPROCESS_BUDGET: f64 = 20.0;

#[derive(Clone, Debug, PartialEq)]
pub struct DualComparison {
    pub direct: Complex64,
    pub dual: Complex64,
    pub discrepancy: f64,
    /// `C(N^{1/2} + N^{1−α/2})`.
    pub budget: f64,
    /// `discrepancy / (N^{1/2} + N^{1−α/2})`.
    pub normalized: f64,
    pub dual_terms: usize,
    /// Dual indices whose stationary point falls outside `(N−1, 2N)`.
    pub out_of_range: Vec<i128>,
}

impl DualComparison {
    pub fn within_budget(&self) -> bool {
        self.discrepancy <= self.budget
    }
}

/// `Σ_{N≤n<2N} e(θn^α + ξn)` against its stationary-phase dual
/// `Σ_m e(f(u_m) − m u_m + 1/8) f''(u_m)^{−1/2}` with `f(u) = θu^α + ξu`,
/// `α = r/(r−1)` and `f'(u_m) = m`. Here `e(y) = e^{2πiy}` and `ξ = x/2π`.
pub fn bprocess_dual_compare(r: u32, theta: DoubleDouble, x: Turns, n: u64) -> Result<DualComparison> {
    if !(3..=5).contains(&r) {
        return Err(Error::Domain("r must be 3, 4 or 5".into()));
    }
    if !(2..=1 << 16).contains(&n) {
        return Err(Error::Domain("N must lie in 2..=2^16".into()));
    }
    if !(theta > DoubleDouble::ZERO) {
        return Err(Error::Domain("theta must be positive".into()));
    }
    let rf = r as f64;
    let alpha = DoubleDouble::from_ratio(r as i128, r as i128 - 1);
    let rel = DispersionRelation::fractional(alpha)?;
    let spec = BlockSpec::unit(rel, n)?;
    let direct = block_sum(&spec, &HighPrecisionTime::from_theta(theta), x)?;

    let xi = x.to_dd();
    let ta = theta * alpha;
    let fprime = |u: f64| {
        let u = DoubleDouble::from_f64(u);
        (ta * u.powf(alpha - DoubleDouble::ONE) + xi).to_f64()
    };
    let (lo_u, hi_u) = ((n - 1) as f64, (2 * n) as f64);
    let m_lo = math::floor(fprime(lo_u)) as i128 + 1;
    let m_hi = math::ceil(fprime(hi_u)) as i128 - 1;
    let mut terms = Vec::new();
    let mut out_of_range = Vec::new();
    let eighth = Turns::from_ratio(1, 8);
    for m in m_lo..=m_hi {
        let s = DoubleDouble::from_i128(m) - xi;
        let v = s / ta;
        // u_m = v^{r−1}; f(u_m) − m·u_m = −(m − ξ)·v^{r−1}/r.
        let mut u = DoubleDouble::ONE;
        for _ in 0..r - 1 {
            u = u * v;
        }
        let uf = u.to_f64();
        if !(uf > lo_u && uf < hi_u) {
            out_of_range.push(m);
        }
        let ph = -(s * u) / DoubleDouble::from_f64(rf);
        let f2 = (ta * (alpha - DoubleDouble::ONE)).to_f64() * math::powf(uf, alpha.to_f64() - 2.0);
        let amp = 1.0 / math::sqrt(f2);
        terms.push((Turns::from_dd(ph) + eighth).unit() * amp);
    }
    let dual = pairwise_sum_complex(&terms);
    let nf = n as f64;
    let scale = math::sqrt(nf) + math::powf(nf, 1.0 - alpha.to_f64() / 2.0);
    let discrepancy = (direct - dual).norm();
    Ok(DualComparison {
        direct,
        dual,
        discrepancy,
        budget: BPROCESS_BUDGET * scale,
        normalized: discrepancy / scale,
        dual_terms: terms.len(),
        out_of_range,
    })
}
