//! Thresholds of randomly punctured codes and the decoding-delay rules for
//! helpers that stop listening early.
//!
//! A code with simple threshold `c★` punctured to a survival fraction `τ`
//! stays decodable on its own as long as `τ > 1 − e^{−c★}`; the surviving
//! block then needs a Bhattacharyya distance above `χ(τ)`.

use crate::error::{Error, Result};

/// Default multiplicative safety margin for [`effective_listen_fraction`].
pub const DEFAULT_LISTEN_MARGIN: f64 = 0.01;

/// A punctured-code operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PunctureParams {
    pub c_star: f64,
    pub tau: f64,
}

impl PunctureParams {
    pub fn new(c_star: f64, tau: f64) -> Self {
        Self { c_star, tau }
    }

    pub fn is_self_decodable(&self) -> bool {
        is_self_decodable(self.c_star, self.tau)
    }

    pub fn threshold(&self) -> Result<f64> {
        punctured_threshold(self.c_star, self.tau)
    }
}

/// Smallest survival fraction (exclusive) that keeps a block self-decodable.
pub fn self_decodable_limit(c_star: f64) -> f64 {
    -(-c_star).exp_m1()
}

/// `τ > 1 − e^{−c★}`, strict.
pub fn is_self_decodable(c_star: f64, tau: f64) -> bool {
    tau > self_decodable_limit(c_star) && tau <= 1.0
}

/// Punctured threshold `χ(τ) = ln[τ / (e^{−c★} − (1 − τ))]`, in nats.
pub fn punctured_threshold(c_star: f64, tau: f64) -> Result<f64> {
    if !(c_star >= 0.0) || !c_star.is_finite() {
        return Err(Error::Domain(format!("threshold {c_star} must be finite and >= 0")));
    }
    if !is_self_decodable(c_star, tau) {
        return Err(Error::NotSelfDecodable { c_star, tau, limit: self_decodable_limit(c_star) });
    }
    if tau == 1.0 {
        return Ok(c_star);
    }
    // e^{-c} - (1 - τ) = τ - (1 - e^{-c}), evaluated without cancellation in e^{-c}
    let denom = tau - self_decodable_limit(c_star);
    Ok((tau / denom).ln())
}

/// Listen fraction `τ'` for a helper that measured broadcast SNR `θ`.
///
/// The admissible set is the open interval
/// `((1 − e^{−c★}) / (1 − e^{−θ}), τ0)`; the lower end is inflated by
/// `1 + margin`.
pub fn effective_listen_fraction(c_star: f64, theta: f64, tau0: f64, margin: f64) -> Result<f64> {
    if !(margin >= 0.0) {
        return Err(Error::Domain(format!("margin {margin} must be >= 0")));
    }
    let chi = punctured_threshold(c_star, tau0)?;
    if !(theta > chi) {
        return Err(Error::NotReliable { theta, chi });
    }
    let lower = self_decodable_limit(c_star) / -(-theta).exp_m1();
    let value = lower * (1.0 + margin);
    if value >= tau0 || (margin == 0.0 && lower >= tau0) {
        return Err(Error::MarginTooLarge { value, tau0 });
    }
    Ok(value)
}

/// Threshold reset to `χ(τ0 − τD)` when decoding takes a fraction `τD` of
/// the frame.
pub fn adjusted_threshold(c_star: f64, tau0: f64, tau_d: f64) -> Result<f64> {
    if !(tau_d >= 0.0) {
        return Err(Error::Domain(format!("decode latency {tau_d} must be >= 0")));
    }
    punctured_threshold(c_star, tau0 - tau_d)
}
