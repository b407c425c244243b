#![cfg_attr(not(feature = "std"), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Numerics for dispersive evolutions on the torus: loss-free phase
//! reduction, dyadic exponential sums, Talbot quantization, fractal and
//! Besov regularity estimators, and spectral NLS/KdV solvers.
//!
//! Everything here works with `alloc` only. File formats, the CLI and
//! parallel orchestration live in the `talbot` crate.

extern crate alloc;

pub mod bounds;
pub mod dd;
pub mod diophantine;
pub mod dispersion;
pub mod evolution;
pub mod expsum;
pub mod error;
pub mod fft;
pub mod fractal;
pub mod fit;
pub mod initial_data;
pub mod linesum;
pub mod math;
pub mod nonlinear;
pub mod poly;
pub mod turns;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use turns::Turns;
