//! Spectral solvers for the Wick-ordered cubic NLS
//! `iu_t + u_xx ± |u|²u ∓ Pu = 0` and KdV `u_t + u_xxx + uu_x = 0` on the
//! torus, and the smoothing residual `u − e^{itL}g`.
//!
//! The truncated datum `P_{≤M} g` is the initial condition. Fields live on a
//! padded grid of `K` points and carry all `K` modes.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dd::DoubleDouble;
use crate::dispersion::{phase, DispersionRelation, HighPrecisionTime};
use crate::error::{Error, Result};
use crate::evolution::{truncated_modes, Provenance, SampleGrid};
use crate::fft::Fft;
use crate::fit::{log_log_fit, pairwise_sum};
use crate::initial_data::CoefficientSource;
use crate::math;
use crate::turns::Turns;

pub const MAX_MODES: usize = 1 << 11;
pub const MAX_DT: f64 = 1e-3;
pub const BLOW_UP_THRESHOLD: f64 = 1e3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Equation {
    /// `+|u|²u − Pu`.
    NlsFocusing,
    /// `−|u|²u + Pu`.
    NlsDefocusing,
    Kdv,
}

impl Equation {
    /// Relation of the linear part: `−n²` for NLS, `n³` for KdV.
    pub fn relation(self) -> DispersionRelation {
        match self {
            Equation::Kdv => DispersionRelation::monomial(1, 3),
            _ => DispersionRelation::monomial(-1, 2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Equation::NlsFocusing => "nls+",
            Equation::NlsDefocusing => "nls-",
            Equation::Kdv => "kdv",
        }
    }
}

/// `P = (1/π)‖g‖²_{L²(𝕋)} = 2 Σ|ĝ(n)|²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WickConstant(pub f64);

pub fn wick_constant(modes: &[(i128, Complex64)]) -> WickConstant {
    let sq: Vec<f64> = modes.iter().map(|m| m.1.norm_sqr()).collect();
    WickConstant(2.0 * pairwise_sum(&sq))
}

/// Grid coefficients `c_n` (FFT order) with `u(2πj/K) = Σ c_n e^{2πijn/K}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    pub modes: Vec<Complex64>,
    pub time: f64,
    /// `(Σ|c_n|²)^{1/2}`, the normalized L² norm.
    pub l2: f64,
    pub mean: Complex64,
}

impl SpectralField {
    fn new(modes: Vec<Complex64>, time: f64) -> Self {
        let sq: Vec<f64> = modes.iter().map(|c| c.norm_sqr()).collect();
        let l2 = math::sqrt(pairwise_sum(&sq));
        let mean = modes[0];
        Self {
            modes,
            time,
            l2,
            mean,
        }
    }

    pub fn grid_values(&self) -> Vec<Complex64> {
        let mut u = self.modes.clone();
        Fft::new(u.len()).inverse(&mut u);
        u
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub equation: Equation,
    pub grid: usize,
    pub truncation: usize,
    pub dt: f64,
    /// Truncated datum `(n, ĝ(n))`, `|n| ≤ M`.
    pub datum: Vec<(i128, Complex64)>,
    pub wick: WickConstant,
    pub snapshots: Vec<SpectralField>,
    pub initial_l2: f64,
    /// Largest `|‖u(t)‖ − ‖g‖|` over the snapshots.
    pub max_l2_drift: f64,
    pub warnings: Vec<String>,
}

fn signed_index(j: usize, k: usize) -> i128 {
    if j < k / 2 {
        j as i128
    } else {
        j as i128 - k as i128
    }
}

fn grid_for(min: usize) -> usize {
    min.next_power_of_two().max(16)
}

fn check_common(m: usize, dt: f64, times: &[f64]) -> Result<Vec<usize>> {
    if m == 0 || m > MAX_MODES {
        return Err(Error::Domain(format!("mode count {m} must lie in 1..=2^11")));
    }
    if !(dt > 0.0 && dt <= MAX_DT) {
        return Err(Error::Domain("time step must lie in (0, 1e-3]".into()));
    }
    let mut steps = Vec::with_capacity(times.len());
    let mut last = 0;
    for &t in times {
        let s = math::round(t / dt);
        if !(t >= 0.0) || (s * dt - t).abs() > 1e-9 * t.max(1.0) {
            return Err(Error::Domain(format!("snapshot time {t} is not a multiple of dt")));
        }
        let s = s as usize;
        if s < last {
            return Err(Error::Domain("snapshot times must be increasing".into()));
        }
        last = s;
        steps.push(s);
    }
    Ok(steps)
}

fn load(datum: &[(i128, Complex64)], k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); k];
    for &(n, c) in datum {
        v[n.rem_euclid(k as i128) as usize] = c;
    }
    v
}

/// `e^{iω(n)h}` for every grid mode, with the phase reduced in double-double.
fn linear_factors(rel: &DispersionRelation, k: usize, h: f64) -> Result<Vec<Complex64>> {
    let t = HighPrecisionTime::from_t(DoubleDouble::from_f64(h));
    (0..k)
        .map(|j| Ok(phase(rel, signed_index(j, k), &t, Turns::ZERO)?.unit()))
        .collect()
}

fn sup_norm(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    equation: Equation,
    grid: usize,
    m: usize,
    dt: f64,
    datum: Vec<(i128, Complex64)>,
    wick: WickConstant,
    snapshots: Vec<SpectralField>,
    warnings: Vec<String>,
) -> Trajectory {
    let initial_l2 = {
        let sq: Vec<f64> = datum.iter().map(|m| m.1.norm_sqr()).collect();
        math::sqrt(pairwise_sum(&sq))
    };
    let max_l2_drift = snapshots
        .iter()
        .map(|s| (s.l2 - initial_l2).abs())
        .fold(0.0, f64::max);
    Trajectory {
        equation,
        grid,
        truncation: m,
        dt,
        datum,
        wick,
        snapshots,
        initial_l2,
        max_l2_drift,
        warnings,
    }
}

pub fn nls_wick_solve<S: CoefficientSource + ?Sized>(
    g: &S,
    focusing: bool,
    m: usize,
    dt: f64,
    times: &[f64],
) -> Result<Trajectory> {
    nls_wick_solve_modes(truncated_modes(g, m), focusing, m, dt, times)
}

/// Strang splitting: half linear step in mode space, the exact pointwise
/// rotation `u ↦ u e^{±i(|u|²−P)dt}` on the grid, half linear step.
pub fn nls_wick_solve_modes(
    datum: Vec<(i128, Complex64)>,
    focusing: bool,
    m: usize,
    dt: f64,
    times: &[f64],
) -> Result<Trajectory> {
    let steps = check_common(m, dt, times)?;
    let equation = if focusing {
        Equation::NlsFocusing
    } else {
        Equation::NlsDefocusing
    };
    let k = grid_for(2 * (2 * m + 1));
    let fft = Fft::new(k);
    let half = linear_factors(&equation.relation(), k, dt / 2.0)?;
    let wick = wick_constant(&datum);
    let sign = if focusing { 1.0 } else { -1.0 };
    let inv_k = 1.0 / k as f64;

    let mut v = load(&datum, k);
    let mut u = vec![Complex64::new(0.0, 0.0); k];
    let mut snapshots = Vec::with_capacity(steps.len());
    let mut done = 0;
    for &target in &steps {
        while done < target {
            for (a, f) in v.iter_mut().zip(&half) {
                *a *= f;
            }
            u.copy_from_slice(&v);
            fft.inverse(&mut u);
            for z in u.iter_mut() {
                let rot = sign * (z.norm_sqr() - wick.0) * dt;
                let (s, c) = math::sin_cos(rot);
                *z *= Complex64::new(c, s);
            }
            let sup = sup_norm(&u);
            if !(sup <= BLOW_UP_THRESHOLD) {
                return Err(Error::BlowUp {
                    time: (done + 1) as f64 * dt,
                    sup,
                });
            }
            fft.forward(&mut u);
            for ((a, z), f) in v.iter_mut().zip(&u).zip(&half) {
                *a = z * inv_k * f;
            }
            done += 1;
        }
        snapshots.push(SpectralField::new(v.clone(), done as f64 * dt));
    }
    Ok(finish(equation, k, m, dt, datum, wick, snapshots, Vec::new()))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum KdvScheme {
    /// Lawson integrating-factor RK4.
    LawsonRk4,
    /// Exponential integrator that integrates the resonance phase
    /// `e^{−3isnn₁n₂}` exactly with the interaction-picture state frozen at
    /// the step midpoint.
    #[default]
    Resonant,
}

pub fn kdv_solve<S: CoefficientSource + ?Sized>(g: &S, m: usize, dt: f64, times: &[f64]) -> Result<Trajectory> {
    kdv_solve_modes(truncated_modes(g, m), m, dt, times)
}

pub fn kdv_solve_modes(datum: Vec<(i128, Complex64)>, m: usize, dt: f64, times: &[f64]) -> Result<Trajectory> {
    kdv_solve_with(datum, m, dt, times, KdvScheme::default())
}

fn check_kdv_datum(datum: &[(i128, Complex64)]) -> Result<()> {
    for &(n, c) in datum {
        let partner = datum.iter().find(|p| p.0 == -n).map(|p| p.1);
        if partner.is_none_or(|p| (p - c.conj()).norm() > 1e-12) {
            return Err(Error::Domain("KdV datum must be real valued".into()));
        }
        if n == 0 && c.norm() > 1e-12 {
            return Err(Error::Domain("KdV datum must have zero mean".into()));
        }
    }
    Ok(())
}

pub fn kdv_solve_with(
    datum: Vec<(i128, Complex64)>,
    m: usize,
    dt: f64,
    times: &[f64],
    scheme: KdvScheme,
) -> Result<Trajectory> {
    let steps = check_common(m, dt, times)?;
    check_kdv_datum(&datum)?;
    let k = grid_for(3 * m + 1);
    let (snapshots, warnings) = match scheme {
        KdvScheme::LawsonRk4 => kdv_lawson(&datum, k, dt, &steps)?,
        KdvScheme::Resonant => kdv_resonant(&datum, k, dt, &steps)?,
    };
    Ok(finish(Equation::Kdv, k, m, dt, datum, WickConstant(0.0), snapshots, warnings))
}

struct KdvGrid {
    k: usize,
    fft: Fft,
    cutoff: i128,
}

impl KdvGrid {
    fn new(k: usize) -> Self {
        Self {
            k,
            fft: Fft::new(k),
            cutoff: (k / 3) as i128,
        }
    }

    fn kept(&self, j: usize) -> Option<i128> {
        let n = signed_index(j, self.k);
        (n.abs() <= self.cutoff).then_some(n)
    }

    /// `(u²)^` for real `u` given by modes `v`, returned in `out` unscaled by
    /// any multiplier; the return value is `max|u|`.
    fn square(&self, v: &mut [Complex64], scratch: &mut [Complex64]) -> f64 {
        scratch.copy_from_slice(v);
        self.fft.inverse(scratch);
        let mut sup: f64 = 0.0;
        for z in scratch.iter_mut() {
            sup = sup.max(z.re.abs());
            *z = Complex64::new(z.re * z.re, 0.0);
        }
        self.fft.forward(scratch);
        let inv_k = 1.0 / self.k as f64;
        for (o, s) in v.iter_mut().zip(scratch.iter()) {
            *o = s * inv_k;
        }
        sup
    }
}

/// One resonance-integrated step `u ↦ e^{hL}u − (1/6)(∂⁻¹e^{hL}w)² +
/// (1/6)e^{hL}(∂⁻¹w)²` where `w` stands for the interaction-picture state
/// pulled back to the start of the step.
#[allow(clippy::too_many_arguments)]
fn resonant_update(
    grid: &KdvGrid,
    u: &[Complex64],
    w: &[Complex64],
    eh: &[Complex64],
    inv_d: &[Complex64],
    a: &mut [Complex64],
    b: &mut [Complex64],
    scratch: &mut [Complex64],
    out: &mut [Complex64],
) -> f64 {
    for j in 0..grid.k {
        a[j] = eh[j] * w[j] * inv_d[j];
        b[j] = w[j] * inv_d[j];
    }
    let sup = grid.square(a, scratch);
    grid.square(b, scratch);
    for j in 0..grid.k {
        out[j] = match grid.kept(j) {
            Some(n) if n != 0 => eh[j] * u[j] + (eh[j] * b[j] - a[j]) / 6.0,
            _ => Complex64::new(0.0, 0.0),
        };
    }
    sup
}

fn kdv_resonant(
    datum: &[(i128, Complex64)],
    k: usize,
    dt: f64,
    steps: &[usize],
) -> Result<(Vec<SpectralField>, Vec<String>)> {
    let grid = KdvGrid::new(k);
    let rel = Equation::Kdv.relation();
    let e_half = linear_factors(&rel, k, dt / 2.0)?;
    let e_back: Vec<Complex64> = e_half.iter().map(|e| e.conj()).collect();
    let e_full: Vec<Complex64> = e_half.iter().map(|e| e * e).collect();
    // ∂⁻¹ = 1/(in) off the mean.
    let inv_d: Vec<Complex64> = (0..k)
        .map(|j| match grid.kept(j) {
            Some(n) if n != 0 => Complex64::new(0.0, -1.0 / n as f64),
            _ => Complex64::new(0.0, 0.0),
        })
        .collect();
    let zero = Complex64::new(0.0, 0.0);
    let mut u = load(datum, k);
    let (mut a, mut b, mut scratch) = (vec![zero; k], vec![zero; k], vec![zero; k]);
    let (mut mid, mut w) = (vec![zero; k], vec![zero; k]);
    let mut snapshots = Vec::with_capacity(steps.len());
    let mut done = 0;
    for &target in steps {
        while done < target {
            // First-order half step to the midpoint, then pull it back.
            resonant_update(&grid, &u, &u, &e_half, &inv_d, &mut a, &mut b, &mut scratch, &mut mid);
            for j in 0..k {
                w[j] = e_back[j] * mid[j];
            }
            let sup = resonant_update(&grid, &u, &w, &e_full, &inv_d, &mut a, &mut b, &mut scratch, &mut mid);
            if !(sup <= BLOW_UP_THRESHOLD) {
                return Err(Error::BlowUp {
                    time: done as f64 * dt,
                    sup,
                });
            }
            u.copy_from_slice(&mid);
            done += 1;
        }
        snapshots.push(SpectralField::new(u.clone(), done as f64 * dt));
    }
    Ok((snapshots, Vec::new()))
}

/// Integrating-factor RK4 for `ĉ_n' = in³ĉ_n − (in/2)(u²)^_n` with the
/// product dealiased to `|n| ≤ K/3`.
fn kdv_lawson(
    datum: &[(i128, Complex64)],
    k: usize,
    dt: f64,
    steps: &[usize],
) -> Result<(Vec<SpectralField>, Vec<String>)> {
    let fft = Fft::new(k);
    let rel = Equation::Kdv.relation();
    let e1 = linear_factors(&rel, k, dt / 2.0)?;
    let e2: Vec<Complex64> = e1.iter().map(|e| e * e).collect();
    let cutoff = (k / 3) as i128;
    let inv_k = 1.0 / k as f64;
    // −(in/2) with the dealiasing mask folded in.
    let deriv: Vec<Complex64> = (0..k)
        .map(|j| {
            let n = signed_index(j, k);
            if n.abs() > cutoff {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, -(n as f64) / 2.0)
            }
        })
        .collect();

    let mut warnings = Vec::new();
    let mut scratch = vec![Complex64::new(0.0, 0.0); k];
    let mut nonlinear = |v: &[Complex64], out: &mut [Complex64]| -> f64 {
        scratch.copy_from_slice(v);
        fft.inverse(&mut scratch);
        let mut sup: f64 = 0.0;
        for z in scratch.iter_mut() {
            sup = sup.max(z.re.abs());
            *z = Complex64::new(z.re * z.re, 0.0);
        }
        fft.forward(&mut scratch);
        for ((o, s), d) in out.iter_mut().zip(scratch.iter()).zip(&deriv) {
            *o = s * inv_k * d;
        }
        sup
    };

    let mut v = load(datum, k);
    let mut k1 = vec![Complex64::new(0.0, 0.0); k];
    let mut k2 = k1.clone();
    let mut k3 = k1.clone();
    let mut k4 = k1.clone();
    let mut w = k1.clone();
    let mut snapshots = Vec::with_capacity(steps.len());
    let mut done = 0;
    let h = dt;
    for &target in steps {
        while done < target {
            let sup = nonlinear(&v, &mut k1);
            if !(sup <= BLOW_UP_THRESHOLD) {
                return Err(Error::BlowUp {
                    time: done as f64 * dt,
                    sup,
                });
            }
            if done == 0 && h * cutoff as f64 * sup > core::f64::consts::FRAC_PI_4 {
                warnings.push(format!(
                    "nonlinear rotation per step {:.3} exceeds pi/4",
                    h * cutoff as f64 * sup
                ));
            }
            for j in 0..k {
                w[j] = e1[j] * (v[j] + 0.5 * h * k1[j]);
            }
            nonlinear(&w, &mut k2);
            for j in 0..k {
                w[j] = e1[j] * v[j] + 0.5 * h * k2[j];
            }
            nonlinear(&w, &mut k3);
            for j in 0..k {
                w[j] = e2[j] * v[j] + h * e1[j] * k3[j];
            }
            nonlinear(&w, &mut k4);
            for j in 0..k {
                v[j] = e2[j] * v[j] + h / 6.0 * (e2[j] * k1[j] + 2.0 * e1[j] * (k2[j] + k3[j]) + k4[j]);
            }
            done += 1;
        }
        snapshots.push(SpectralField::new(v.clone(), done as f64 * dt));
    }
    Ok((snapshots, warnings))
}

/// Linear flow of the truncated datum on the solver grid at time `t`.
pub fn linear_flow(traj: &Trajectory, t: f64) -> Result<Vec<Complex64>> {
    let rel = traj.equation.relation();
    let time = HighPrecisionTime::from_t(DoubleDouble::from_f64(t));
    let mut v = vec![Complex64::new(0.0, 0.0); traj.grid];
    for &(n, c) in &traj.datum {
        v[n.rem_euclid(traj.grid as i128) as usize] = c * phase(&rel, n, &time, Turns::ZERO)?.unit();
    }
    Fft::new(traj.grid).inverse(&mut v);
    Ok(v)
}

/// `u(t, ·) − e^{itL}P_{≤M}g` on the solver grid for snapshot `index`.
pub fn smoothing_residual(traj: &Trajectory, index: usize) -> Result<SampleGrid> {
    let snap = traj
        .snapshots
        .get(index)
        .ok_or_else(|| Error::Domain(format!("no snapshot {index}")))?;
    let lin = linear_flow(traj, snap.time)?;
    let samples = snap.grid_values().iter().zip(&lin).map(|(u, l)| u - l).collect();
    Ok(SampleGrid {
        samples,
        start: 0.0,
        period: core::f64::consts::TAU,
        truncation: traj.truncation,
        band: Some((traj.grid / 2) as u128),
        provenance: Provenance {
            relation: traj.equation.relation().spec_string(),
            datum: format!("truncated datum, M = {}", traj.truncation),
            slice: format!("horiz:t={}", snap.time),
            time: format!("{}", snap.time),
        },
    })
}

/// Normalized L² norm of the residual at snapshot `index`.
pub fn residual_norm(traj: &Trajectory, index: usize) -> Result<f64> {
    let r = smoothing_residual(traj, index)?;
    Ok(crate::linesum::grid_norm(&r.samples, 2.0))
}

/// Log-log slope of the residual norm at time `t` against the datum
/// amplitude `λ`.
pub fn amplitude_scaling(
    equation: Equation,
    datum: &[(i128, Complex64)],
    m: usize,
    dt: f64,
    t: f64,
    lambdas: &[f64],
) -> Result<(Vec<(f64, f64)>, f64)> {
    let mut pairs = Vec::with_capacity(lambdas.len());
    for &lam in lambdas {
        let scaled: Vec<(i128, Complex64)> = datum.iter().map(|&(n, c)| (n, c * lam)).collect();
        let traj = match equation {
            Equation::Kdv => kdv_solve_modes(scaled, m, dt, &[t])?,
            Equation::NlsFocusing => nls_wick_solve_modes(scaled, true, m, dt, &[t])?,
            Equation::NlsDefocusing => nls_wick_solve_modes(scaled, false, m, dt, &[t])?,
        };
        pairs.push((lam, residual_norm(&traj, 0)?));
    }
    let slope = log_log_fit(&pairs)?.slope;
    Ok((pairs, slope))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::StepFunction;

    #[test]
    fn constant_datum_rotates_exactly() {
        let a = 0.7;
        let g = StepFunction::constant(Complex64::new(a, 0.0));
        let traj = nls_wick_solve(&g, true, 4, 1e-3, &[0.5, 1.0]).unwrap();
        assert!((traj.wick.0 - 2.0 * a * a).abs() < 1e-15);
        for s in &traj.snapshots {
            let expect = Complex64::new(0.0, -a * a * s.time).exp() * a;
            for z in s.grid_values() {
                assert!((z - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_datum_stays_zero() {
        let g = StepFunction::constant(Complex64::new(0.0, 0.0));
        let nls = nls_wick_solve(&g, false, 8, 1e-3, &[0.1]).unwrap();
        assert!(nls.snapshots[0].l2 == 0.0);
        let kdv = kdv_solve(&g, 8, 1e-3, &[0.1]).unwrap();
        assert!(kdv.snapshots[0].l2 == 0.0);
    }

    #[test]
    fn kdv_cosine_conserves_l2_and_mean() {
        let datum = vec![(-1, Complex64::new(0.5, 0.0)), (1, Complex64::new(0.5, 0.0))];
        let times: Vec<f64> = (1..=10).map(|j| j as f64 / 10.0).collect();
        let traj = kdv_solve_modes(datum, 16, 1e-3, &times).unwrap();
        assert!(traj.max_l2_drift <= 1e-8, "{}", traj.max_l2_drift);
        assert!(traj.snapshots.iter().all(|s| s.mean.norm() < 1e-15));
    }

    #[test]
    fn residual_vanishes_at_time_zero() {
        let g = StepFunction::half_indicator();
        let traj = nls_wick_solve(&g, true, 32, 1e-3, &[0.0]).unwrap();
        let r = smoothing_residual(&traj, 0).unwrap();
        assert!(r.samples.iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn kdv_rejects_complex_or_biased_data() {
        let g = StepFunction::half_indicator();
        assert!(kdv_solve(&g, 8, 1e-3, &[0.1]).is_err());
    }
}
