//! Code thresholds, frame-error-rate bounds and Monte Carlo validation for
//! incremental-redundancy cooperative coding over quasi-static Rayleigh
//! fading.
//!
//! The crate follows the chain of quantities used by the analysis:
//!
//! - [`channels`]: capacity, Bhattacharyya parameter and cutoff rate of
//!   binary-input symmetric channels.
//! - [`spectra`]: asymptotic weight spectra and the thresholds `c0`, `c★`.
//! - [`puncturing`]: punctured thresholds `χ(τ)` and listen-fraction rules.
//! - [`protocol`]: geometry, reliable sets and the dynamic slot schedule.
//! - [`outage`]: code-outage probabilities and the FER upper bound.
//! - [`asymptotics`]: high-SNR bounds, diversity and coding gain.
//! - [`energy`]: ε-achievable energies and energy savings.
//! - [`simulator`]: frame-level Monte Carlo under threshold decoding.
//! - [`scenario`] and [`cli`]: file formats and the command-line front end.

// `!(x > 0.0)` style checks are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod channels;
pub mod cli;
pub mod energy;
pub mod error;
pub mod outage;
pub mod protocol;
pub mod puncturing;
pub mod quadrature;
pub mod scenario;
pub mod simulator;
pub mod spectra;
pub mod stats;

pub use error::{Error, Result};

/// Power ratio to decibels.
pub fn to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Decibels to power ratio.
pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
