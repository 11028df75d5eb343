//! Fourier-based quantum signal processing.
//!
//! The crate approximates scalar functions by truncated Fourier series
//! ([`approx`]), completes a normalized series to an SU(2)-valued one
//! ([`complement`]), turns the pair into single-qubit pulses ([`pulses`]) and
//! checks the resulting block-encoding of `g(Ht)` with an exact dense-matrix
//! simulator ([`qsim`]). The [`cli`] module wires the stages together.

pub mod approx;
pub mod cli;
pub mod complement;
pub mod error;
pub mod fourier;
pub mod pulses;
pub mod qsim;

pub use error::{Error, Result};
pub use fourier::{FourierSeries, GridReport};
