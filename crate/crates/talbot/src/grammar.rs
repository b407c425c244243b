//! Spec-string grammars for relations, data and slices.
//!
//! ```text
//! relation  poly:c_d,...,c_1,c_0 | frac:<alpha> | boussinesq | bo | gravity | gravcap
//! datum     step:<positions>[:<values>]      values default to 1,0,1,0,...
//! slice     horiz:<theta> | vert:<x0>:<t0>,<t1> | obliq:<theta>:<k>/<l>
//! theta     rat:a/q | kl:sqrt2|phi|e | rand:<seed> | <decimal>
//! position  0 | pi | 3pi/4 | -pi/3 | <decimal radians>
//! ```
//!
//! `theta` is `t/2π` (for oblique slices, `c/2π`).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use talbot_core::dd::DoubleDouble;
use talbot_core::dispersion::{DispersionRelation, HighPrecisionTime};
use talbot_core::evolution::SliceSpec;
use talbot_core::initial_data::{Breakpoint, StepFunction};
use talbot_core::poly::IntPoly;
use talbot_core::Turns;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("cannot parse {what} `{input}`: {reason}")]
pub struct ParseError {
    pub what: &'static str,
    pub input: String,
    pub reason: String,
}

fn err(what: &'static str, input: &str, reason: impl Into<String>) -> ParseError {
    ParseError {
        what,
        input: input.into(),
        reason: reason.into(),
    }
}

/// Exact `p/q` for a plain decimal (`-12.375`), or `a/b`.
fn parse_ratio(s: &str) -> Option<(i128, i128)> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (a, b) = (a.trim().parse::<i128>().ok()?, b.trim().parse::<i128>().ok()?);
        return (b != 0).then_some((a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 30 {
        return None;
    }
    let den = 10i128.checked_pow(frac.len() as u32)?;
    let digits = format!("{whole}{frac}");
    let num = if digits.is_empty() { 0 } else { digits.parse::<i128>().ok()? };
    Some((if neg { -num } else { num }, den))
}

fn parse_real(what: &'static str, s: &str) -> Result<DoubleDouble, ParseError> {
    let (p, q) = parse_ratio(s).ok_or_else(|| err(what, s, "expected a decimal or a/b"))?;
    Ok(DoubleDouble::from_ratio(p, q))
}

pub fn parse_relation(s: &str) -> Result<DispersionRelation, ParseError> {
    let what = "relation";
    match s.trim() {
        "boussinesq" => return Ok(DispersionRelation::Boussinesq),
        "bo" => return Ok(DispersionRelation::BenjaminOno),
        "gravity" => return Ok(DispersionRelation::Gravity),
        "gravcap" => return Ok(DispersionRelation::GravityCapillary),
        _ => {}
    }
    if let Some(body) = s.trim().strip_prefix("poly:") {
        let coeffs: Result<Vec<i64>, _> = body.split(',').map(|c| c.trim().parse::<i64>()).collect();
        let coeffs = coeffs.map_err(|e| err(what, s, e.to_string()))?;
        return DispersionRelation::polynomial(IntPoly::from_descending(&coeffs)).map_err(|e| err(what, s, e.to_string()));
    }
    if let Some(body) = s.trim().strip_prefix("frac:") {
        let alpha = parse_real(what, body)?;
        return DispersionRelation::fractional(alpha).map_err(|e| err(what, s, e.to_string()));
    }
    Err(err(what, s, "unknown relation kind"))
}

/// `θ = t/2π`.
pub fn parse_theta(s: &str) -> Result<HighPrecisionTime, ParseError> {
    let what = "time";
    let s = s.trim();
    if let Some(body) = s.strip_prefix("rat:") {
        let (a, q) = body
            .split_once('/')
            .and_then(|(a, q)| Some((a.trim().parse::<i128>().ok()?, q.trim().parse::<i128>().ok()?)))
            .ok_or_else(|| err(what, s, "expected rat:a/q"))?;
        return HighPrecisionTime::rational(a, q).map_err(|e| err(what, s, e.to_string()));
    }
    if let Some(body) = s.strip_prefix("kl:") {
        let x = match body {
            "sqrt2" => DoubleDouble::SQRT2,
            "phi" => DoubleDouble::PHI,
            "e" => DoubleDouble::E,
            _ => return Err(err(what, s, "known constants are sqrt2, phi, e")),
        };
        return Ok(HighPrecisionTime::from_theta(x));
    }
    if let Some(body) = s.strip_prefix("rand:") {
        let seed: u64 = body.parse().map_err(|_| err(what, s, "seed must be an unsigned integer"))?;
        return Ok(random_theta(seed));
    }
    Ok(HighPrecisionTime::from_theta(parse_real(what, s)?))
}

/// A uniform draw of `θ ∈ [0, 1)` with all 128 fractional bits random.
pub fn random_theta(seed: u64) -> HighPrecisionTime {
    let frac = ChaCha8Rng::seed_from_u64(seed).gen::<u128>();
    HighPrecisionTime::Fixed {
        whole: 0,
        frac: Turns(frac),
    }
}

/// Multiples of π become exact turn fractions; decimals are radians.
enum Position {
    Turns(i128, i128),
    Radians(f64),
}

fn parse_position(what: &'static str, s: &str) -> Result<Position, ParseError> {
    let t = s.trim();
    if let Some(i) = t.find("pi") {
        let (coef, rest) = (&t[..i], &t[i + 2..]);
        let num = match coef {
            "" | "+" => 1,
            "-" => -1,
            c => c.parse::<i128>().map_err(|_| err(what, s, "bad multiple of pi"))?,
        };
        let den = match rest {
            "" => 1,
            r => r
                .strip_prefix('/')
                .and_then(|d| d.parse::<i128>().ok())
                .filter(|&d| d > 0)
                .ok_or_else(|| err(what, s, "expected k pi/q"))?,
        };
        return Ok(Position::Turns(num, 2 * den));
    }
    if t == "0" {
        return Ok(Position::Turns(0, 1));
    }
    t.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .map(Position::Radians)
        .ok_or_else(|| err(what, s, "expected a multiple of pi or radians"))
}

fn position_dd(what: &'static str, s: &str) -> Result<DoubleDouble, ParseError> {
    Ok(match parse_position(what, s)? {
        Position::Turns(p, q) => DoubleDouble::TWO_PI * DoubleDouble::from_ratio(p, q),
        Position::Radians(x) => DoubleDouble::from_f64(x),
    })
}

pub fn parse_datum(s: &str) -> Result<StepFunction, ParseError> {
    let what = "datum";
    let body = s.trim().strip_prefix("step:").ok_or_else(|| err(what, s, "expected step:..."))?;
    let (pos, vals) = match body.split_once(':') {
        Some((p, v)) => (p, Some(v)),
        None => (body, None),
    };
    let mut points = Vec::new();
    for token in pos.split(',') {
        let b = match parse_position(what, token)? {
            Position::Turns(p, q) => Breakpoint::rational(p, q).map_err(|e| err(what, s, e.to_string()))?,
            Position::Radians(x) => Breakpoint::from_radians(x),
        };
        points.push(b);
    }
    let values: Vec<Complex64> = match vals {
        Some(v) => v
            .split(',')
            .map(|x| x.trim().parse::<f64>().map(|x| Complex64::new(x, 0.0)))
            .collect::<Result<_, _>>()
            .map_err(|e| err(what, s, e.to_string()))?,
        None => (0..points.len())
            .map(|i| Complex64::new(if i % 2 == 0 { 1.0 } else { 0.0 }, 0.0))
            .collect(),
    };
    if points.len() != values.len() {
        return Err(err(what, s, "need one value per breakpoint"));
    }
    let mut pairs: Vec<(Breakpoint, Complex64)> = points.into_iter().zip(values).collect();
    pairs.sort_by_key(|p| p.0.turns());
    let (bps, vals): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    StepFunction::new(bps, vals).map_err(|e| err(what, s, e.to_string()))
}

pub fn parse_slice(s: &str) -> Result<SliceSpec, ParseError> {
    let what = "slice";
    let s = s.trim();
    if let Some(body) = s.strip_prefix("horiz:") {
        return Ok(SliceSpec::Horizontal { t: parse_theta(body)? });
    }
    if let Some(body) = s.strip_prefix("vert:") {
        let (x0, range) = body.split_once(':').ok_or_else(|| err(what, s, "expected vert:x0:t0,t1"))?;
        let (t0, t1) = range.split_once(',').ok_or_else(|| err(what, s, "expected t0,t1"))?;
        let x0 = match parse_position(what, x0)? {
            Position::Turns(p, q) => Turns::from_ratio(p, q as u64),
            Position::Radians(x) => Turns::from_radians(x),
        };
        let (t0, t1) = (position_dd(what, t0)?, position_dd(what, t1)?);
        if !(t1 > t0) {
            return Err(err(what, s, "need t0 < t1"));
        }
        return Ok(SliceSpec::Vertical { x0, t0, t1 });
    }
    if let Some(body) = s.strip_prefix("obliq:") {
        let (c, slope) = body.rsplit_once(':').ok_or_else(|| err(what, s, "expected obliq:c:k/l"))?;
        let (k, l) = slope
            .split_once('/')
            .and_then(|(k, l)| Some((k.parse::<u64>().ok()?, l.parse::<u64>().ok()?)))
            .ok_or_else(|| err(what, s, "slope must be k/l"))?;
        return SliceSpec::oblique(parse_theta(c)?, k, l).map_err(|e| err(what, s, e.to_string()));
    }
    Err(err(what, s, "unknown slice kind"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_ratio("-12.375"), Some((-12375, 1000)));
        assert_eq!(parse_ratio("3/7"), Some((3, 7)));
        assert_eq!(parse_ratio(".5"), Some((5, 10)));
        assert_eq!(parse_ratio("1e3"), None);
        assert_eq!(parse_ratio(""), None);
    }

    #[test]
    fn relations() {
        let r = parse_relation("poly:-1,0,0").unwrap();
        assert_eq!(r, DispersionRelation::monomial(-1, 2));
        assert_eq!(r.spec_string(), "poly:-1,0,0");
        assert_eq!(parse_relation("gravcap").unwrap(), DispersionRelation::GravityCapillary);
        assert!(matches!(parse_relation("frac:3/2").unwrap(), DispersionRelation::FractionalPower(_)));
        assert!(parse_relation("poly:0").is_err());
        assert!(parse_relation("cubic").is_err());
    }

    #[test]
    fn half_indicator_datum() {
        assert_eq!(parse_datum("step:0,pi").unwrap(), StepFunction::half_indicator());
        let g = parse_datum("step:pi,0:-0.5,0.5").unwrap();
        assert_eq!(g.values()[0], Complex64::new(0.5, 0.0));
        assert!(parse_datum("step:0,pi:1").is_err());
    }

    #[test]
    fn slices() {
        let s = parse_slice("obliq:rat:1/3:1/1").unwrap();
        assert_eq!(s, SliceSpec::oblique(HighPrecisionTime::rational(1, 3).unwrap(), 1, 1).unwrap());
        assert!(parse_slice("obliq:kl:sqrt2:2/4").is_err());
        let v = parse_slice("vert:pi/2:0,2pi").unwrap();
        match v {
            SliceSpec::Vertical { x0, .. } => assert_eq!(x0, Turns::from_ratio(1, 4)),
            _ => panic!("not vertical"),
        }
        assert_eq!(parse_theta("rand:7").unwrap(), parse_theta("rand:7").unwrap());
        assert_ne!(parse_theta("rand:7").unwrap(), parse_theta("rand:8").unwrap());
    }
}
