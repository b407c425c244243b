use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A wide-integer evaluation left the i128 range.
    Overflow { n: i128 },
    /// Continued-fraction digits ran past the working precision.
    PrecisionExhausted { achieved_depth: usize },
    Domain(String),
    /// All abscissae equal, or too few points for a fit.
    DegenerateFit,
    /// The requested slice cannot be evaluated for this relation.
    UnsupportedSlice(String),
    /// The blow-up guard tripped during time stepping.
    BlowUp { time: f64, sup: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Overflow { n } => write!(f, "dispersion value overflows i128 at n = {n}"),
            Error::PrecisionExhausted { achieved_depth } => {
                write!(f, "precision exhausted after {achieved_depth} partial quotients")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::DegenerateFit => f.write_str("degenerate fit: too few distinct scales (exponent fits need four)"),
            Error::UnsupportedSlice(msg) => write!(f, "unsupported slice: {msg}"),
            Error::BlowUp { time, sup } => {
                write!(f, "blow-up guard tripped at t = {time}: sup |u| = {sup:e}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
