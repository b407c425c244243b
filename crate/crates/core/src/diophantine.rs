//! Continued fractions, Dirichlet approximation, the Khinchin–Lévy prefix
//! heuristic and Gauss sums.
//!
//! Continued fractions are computed with Lévy's interval method: the input is
//! widened to an interval covering its rounding error, both endpoints are
//! expanded in exact integer arithmetic, and only the quotients on which they
//! agree are reported.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::fit::pairwise_sum_complex;
use crate::math;
use crate::poly::IntPoly;
use crate::turns::Turns;

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a as i128
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReducedRational {
    num: i128,
    den: i128,
}

impl ReducedRational {
    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        let g = gcd(num, den);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Self {
            num: s * num / g,
            den: s * den / g,
        })
    }

    pub fn integer(n: i128) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn numerator(self) -> i128 {
        self.num
    }

    pub fn denominator(self) -> i128 {
        self.den
    }

    pub fn to_dd(self) -> DoubleDouble {
        DoubleDouble::from_ratio(self.num, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.to_dd().to_f64()
    }
}

impl fmt::Display for ReducedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    /// Produced all requested quotients.
    DepthReached,
    /// The value is a rational whose full expansion is reported.
    Rational,
    /// The uncertainty interval stopped resolving the next quotient.
    PrecisionExhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuedFraction {
    pub value: DoubleDouble,
    pub partial_quotients: Vec<i128>,
    pub convergents: Vec<ReducedRational>,
    pub termination: Termination,
    /// When precision ran out: a lower bound for the first unresolved quotient.
    pub next_quotient_floor: Option<i128>,
}

impl ContinuedFraction {
    pub fn depth(&self) -> usize {
        self.partial_quotients.len()
    }

    /// Turns a precision shortfall into an error.
    pub fn require_depth(self, depth: usize) -> Result<Self> {
        if self.termination == Termination::PrecisionExhausted && self.depth() < depth {
            Err(Error::PrecisionExhausted {
                achieved_depth: self.depth(),
            })
        } else {
            Ok(self)
        }
    }
}

const MAX_DEPTH: usize = 64;
const SCALE_BITS: i32 = 124;
// Next quotient must be at least 2^24 before a value is called rational.
const RATIONAL_SLACK: f64 = 1.0 / 16_777_216.0;

/// Expansion of a double-double value, trusting it to about 2^-104 relative.
pub fn continued_fraction(x: DoubleDouble, depth: usize) -> Result<ContinuedFraction> {
    let err = math::abs(x.hi()) * math::powi(2.0, -104) + math::powi(2.0, -122);
    continued_fraction_with_error(x, err, depth)
}

/// Expansion of a value known only to `f64` precision.
pub fn continued_fraction_f64(x: f64, depth: usize) -> Result<ContinuedFraction> {
    let err = math::abs(x) * math::powi(2.0, -53) + math::powi(2.0, -122);
    continued_fraction_with_error(DoubleDouble::from_f64(x), err, depth)
}

/// Endpoint tail `num/den`, or `None` once the endpoint has been consumed exactly.
type Tail = Option<(i128, i128)>;

/// Expansion of every real within `abs_err` of `x`, to their common prefix.
pub fn continued_fraction_with_error(
    x: DoubleDouble,
    abs_err: f64,
    depth: usize,
) -> Result<ContinuedFraction> {
    if !x.is_finite() || !(abs_err >= 0.0) {
        return Err(Error::Domain("continued fraction of a non-finite value".into()));
    }
    if depth == 0 || depth > MAX_DEPTH {
        return Err(Error::Domain("continued fraction depth must be in 1..=64".into()));
    }
    if math::abs(x.hi()) >= 9.0e15 {
        return Err(Error::Domain("continued fraction input too large".into()));
    }
    if abs_err >= 0.25 {
        return Err(Error::PrecisionExhausted { achieved_depth: 0 });
    }
    let d: i128 = 1 << SCALE_BITS;
    let a0_dd = x.floor();
    let a0 = a0_dd.hi() as i128 + a0_dd.lo() as i128;
    let frac = (x - a0_dd).ldexp(SCALE_BITS);
    let f = frac.hi() as i128 + frac.lo() as i128;
    let e = math::ceil(abs_err * math::powi(2.0, SCALE_BITS)) as i128 + 2;
    let width = 2.0 * e as f64 / math::powi(2.0, SCALE_BITS);

    let mut out = ContinuedFraction {
        value: x,
        partial_quotients: Vec::new(),
        convergents: Vec::new(),
        termination: Termination::DepthReached,
        next_quotient_floor: None,
    };
    let mut conv = Convergents::new();

    // Integer part: endpoints are a0 + (f ± e)/d.
    let (lo, hi) = (f - e, f + e);
    let (fl_lo, fl_hi) = (a0 + lo.div_euclid(d), a0 + hi.div_euclid(d));
    let (r_lo, r_hi) = (lo.rem_euclid(d), hi.rem_euclid(d));
    if fl_lo != fl_hi || r_lo == 0 || r_hi == 0 {
        // The interval touches an integer.
        let cand = if r_lo == 0 { fl_lo } else { fl_lo + 1 };
        finish_disagreement(&mut out, &mut conv, &[cand], width, None);
        return Ok(out);
    }
    conv.push(fl_lo).ok_or(Error::Domain("convergent overflow".into()))?;
    out.partial_quotients.push(fl_lo);
    out.convergents.push(conv.current());

    let mut tails: [Tail; 2] = [Some((d, r_lo)), Some((d, r_hi))];
    while out.partial_quotients.len() < depth {
        let (ta, tb) = match (tails[0], tails[1]) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                // One endpoint equals the last convergent exactly.
                finish_disagreement(&mut out, &mut conv, &[], width, None);
                return Ok(out);
            }
        };
        let qa = ta.0 / ta.1;
        let qb = tb.0 / tb.1;
        if qa != qb {
            let (qmin, tmin) = if qa < qb { (qa, ta) } else { (qb, tb) };
            let exact = tmin.0 - qmin * tmin.1 == 0;
            let cand = if exact { qmin } else { qmin + 1 };
            finish_disagreement(&mut out, &mut conv, &[cand], width, Some(qmin));
            return Ok(out);
        }
        if conv.push(qa).is_none() {
            out.termination = Termination::PrecisionExhausted;
            out.next_quotient_floor = Some(qa);
            return Ok(out);
        }
        out.partial_quotients.push(qa);
        out.convergents.push(conv.current());
        for t in tails.iter_mut() {
            let (num, den) = t.unwrap();
            let rem = num - qa * den;
            *t = if rem == 0 { None } else { Some((den, rem)) };
        }
    }
    Ok(out)
}

fn finish_disagreement(
    out: &mut ContinuedFraction,
    conv: &mut Convergents,
    extra: &[i128],
    width: f64,
    floor: Option<i128>,
) {
    let mut trial = conv.clone();
    let mut ok = true;
    for &a in extra {
        ok &= trial.push(a).is_some();
    }
    let q = trial.current().den as f64;
    if ok && trial.len() > 0 && q * q * width <= RATIONAL_SLACK {
        let mut quotients = out.partial_quotients.clone();
        quotients.extend_from_slice(extra);
        // Canonical form never ends in 1 (except the bare integer 1).
        if quotients.len() > 1 && *quotients.last().unwrap() == 1 {
            quotients.pop();
            *quotients.last_mut().unwrap() += 1;
        }
        let mut c = Convergents::new();
        out.convergents.clear();
        for &a in &quotients {
            c.push(a);
            out.convergents.push(c.current());
        }
        out.partial_quotients = quotients;
        out.termination = Termination::Rational;
    } else {
        out.termination = Termination::PrecisionExhausted;
        out.next_quotient_floor = floor;
    }
}

#[derive(Clone)]
struct Convergents {
    p: (i128, i128),
    q: (i128, i128),
    len: usize,
}

impl Convergents {
    fn new() -> Self {
        Self {
            p: (1, 0),
            q: (0, 1),
            len: 0,
        }
    }

    fn push(&mut self, a: i128) -> Option<()> {
        let p = a.checked_mul(self.p.0)?.checked_add(self.p.1)?;
        let q = a.checked_mul(self.q.0)?.checked_add(self.q.1)?;
        self.p = (p, self.p.0);
        self.q = (q, self.q.0);
        self.len += 1;
        Some(())
    }

    fn current(&self) -> ReducedRational {
        ReducedRational {
            num: self.p.0,
            den: self.q.0,
        }
    }

    fn len(&self) -> usize {
        self.len
    }
}

/// Best approximation `a/q` with `q ≤ big_q`; `|theta − a/q| ≤ 1/(q·big_q)`.
pub fn dirichlet_approx(theta: DoubleDouble, big_q: u64) -> Result<(ReducedRational, f64)> {
    if big_q == 0 {
        return Err(Error::Domain("Q must be positive".into()));
    }
    let cf = continued_fraction(theta, MAX_DEPTH)?;
    let mut best = cf.convergents[0];
    for &c in &cf.convergents {
        if c.den > big_q as i128 {
            break;
        }
        best = c;
    }
    let exact = cf.termination == Termination::Rational && best == *cf.convergents.last().unwrap();
    let remainder = if exact {
        0.0
    } else {
        (theta - best.to_dd()).to_f64()
    };
    Ok((best, remainder))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Rational,
    KhinchinLevyPass,
    KhinchinLevyFail,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KlConfig {
    pub eps: f64,
    /// First convergent index the growth condition is checked at.
    pub burn_in: usize,
    /// Multiplicative slack `C` in `q_{n+1} ≤ C·q_n^{1+eps}`.
    pub growth_constant: f64,
}

impl Default for KlConfig {
    fn default() -> Self {
        Self {
            eps: 0.25,
            burn_in: 3,
            growth_constant: 4.0,
        }
    }
}

/// Finite-depth surrogate for the Khinchin–Lévy property.
#[derive(Clone, Debug, PartialEq)]
pub struct DiophantineClass {
    pub verdict: Verdict,
    /// Convergent index that decided the verdict, or the depth checked.
    pub witness_depth: usize,
    pub epsilon: f64,
    /// Always true: the verdict only covers the computed prefix.
    pub heuristic: bool,
}

pub fn khinchin_levy_test(x: DoubleDouble, depth: usize, eps: f64) -> Result<DiophantineClass> {
    khinchin_levy_test_with(x, depth, KlConfig { eps, ..KlConfig::default() })
}

pub fn khinchin_levy_test_with(
    x: DoubleDouble,
    depth: usize,
    cfg: KlConfig,
) -> Result<DiophantineClass> {
    if depth < 5 {
        return Err(Error::Domain("Khinchin-Levy test needs depth >= 5".into()));
    }
    if !(cfg.eps > 0.0) {
        return Err(Error::Domain("eps must be positive".into()));
    }
    let cf = continued_fraction(x, depth)?;
    let class = |verdict, witness_depth| DiophantineClass {
        verdict,
        witness_depth,
        epsilon: cfg.eps,
        heuristic: true,
    };
    if cf.termination == Termination::Rational {
        return Ok(class(Verdict::Rational, cf.depth()));
    }
    let qs: Vec<f64> = cf.convergents.iter().map(|c| c.den as f64).collect();
    let log_c = math::ln(cfg.growth_constant);
    let violates = |qn: f64, qnext: f64| math::ln(qnext) > (1.0 + cfg.eps) * math::ln(qn) + log_c;
    for n in cfg.burn_in..qs.len().saturating_sub(1) {
        if violates(qs[n], qs[n + 1]) {
            return Ok(class(Verdict::KhinchinLevyFail, n));
        }
    }
    if let (Some(a), Termination::PrecisionExhausted) = (cf.next_quotient_floor, cf.termination) {
        // q_{n+1} ≥ a·q_n + q_{n-1} even though a itself is not resolved.
        let n = qs.len() - 1;
        let prev = if n > 0 { qs[n - 1] } else { 0.0 };
        if n >= cfg.burn_in && violates(qs[n], a as f64 * qs[n] + prev) {
            return Ok(class(Verdict::KhinchinLevyFail, n));
        }
    }
    if qs.len() < cfg.burn_in + 2 {
        return Err(Error::PrecisionExhausted {
            achieved_depth: qs.len(),
        });
    }
    if cf.depth() < depth {
        return Ok(class(Verdict::Undetermined, cf.depth()));
    }
    Ok(class(Verdict::KhinchinLevyPass, cf.depth()))
}

/// `Σ_{j<q} e^{2πi·a·ω(j)/q}` from residues of `ω(j)` mod `q`.
pub fn gauss_coefficient_sum(a: i128, q: u64, omega: &IntPoly) -> Result<Complex64> {
    if q == 0 || gcd(a, q as i128) != 1 {
        return Err(Error::Domain("Gauss sum needs q >= 1 and gcd(a, q) = 1".into()));
    }
    let a_mod = a.rem_euclid(q as i128) as u128;
    let terms: Vec<Complex64> = (0..q)
        .map(|j| {
            let r = (a_mod * omega.eval_mod(j as i128, q) as u128) % q as u128;
            Turns::from_ratio(r as i128, q).unit()
        })
        .collect();
    Ok(pairwise_sum_complex(&terms))
}

/// Time `t` with `t^{1−r}(r−1)^{r−1}r^{−r} = c_target`.
pub fn solve_time_for_ctr(c_target: DoubleDouble, r: u32) -> Result<DoubleDouble> {
    if !(c_target.hi() > 0.0) {
        return Err(Error::Domain("c_target must be positive".into()));
    }
    if !(2..=20).contains(&r) {
        return Err(Error::Domain("r must be in 2..=20".into()));
    }
    let r = r as i128;
    let k = DoubleDouble::from_ratio((r - 1).pow(r as u32 - 1), r.pow(r as u32));
    Ok((k / c_target).powf(DoubleDouble::from_ratio(1, r - 1)))
}

/// `c_{t,r} = t^{1−r}(r−1)^{r−1}r^{−r}`.
pub fn ctr(t: DoubleDouble, r: u32) -> DoubleDouble {
    let r = r as i128;
    let k = DoubleDouble::from_ratio((r - 1).pow(r as u32 - 1), r.pow(r as u32));
    k * t.powf(DoubleDouble::from_i128(1 - r))
}
