//! Information measures of binary-input symmetric-output memoryless channels.
//!
//! Three channels are modelled with their natural parameter: the binary
//! erasure channel (erasure probability), the binary-input AWGN channel
//! (linear SNR `λ`, noise variance 1/2 per dimension and amplitude `√λ`), and
//! the fully interleaved Rayleigh fading channel (average SNR `η`, exposed
//! only through its Bhattacharyya parameter). A dummy channel stands in for
//! punctured positions: its output carries no information about the input.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Absolute accuracy of the BI-AWGN capacity integral.
pub const AWGN_CAPACITY_TOL: f64 = 1e-9;

/// Truncation of the BI-AWGN output integral, in noise standard deviations.
const AWGN_TAIL_SIGMAS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    Bec,
    BiAwgn,
    FullyInterleavedRayleigh,
    Dummy,
}

impl ChannelKind {
    fn name(self) -> &'static str {
        match self {
            ChannelKind::Bec => "BEC",
            ChannelKind::BiAwgn => "BI-AWGN",
            ChannelKind::FullyInterleavedRayleigh => "fully interleaved Rayleigh",
            ChannelKind::Dummy => "dummy",
        }
    }
}

/// A validated channel instance. Construct through [`ChannelSpec::bec`],
/// [`ChannelSpec::bi_awgn`], [`ChannelSpec::firf`] or [`ChannelSpec::dummy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    kind: ChannelKind,
    param: f64,
}

/// All measures of one channel at once.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMeasures {
    pub capacity: f64,
    pub bhattacharyya: f64,
    pub bhattacharyya_rate: f64,
    pub cutoff_rate: f64,
}

impl ChannelSpec {
    pub fn bec(erasure: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&erasure) {
            return Err(Error::Domain(format!("BEC erasure probability {erasure} not in [0, 1]")));
        }
        Ok(Self { kind: ChannelKind::Bec, param: erasure })
    }

    pub fn bi_awgn(snr: f64) -> Result<Self> {
        Self::snr_channel(ChannelKind::BiAwgn, snr)
    }

    pub fn firf(snr: f64) -> Result<Self> {
        Self::snr_channel(ChannelKind::FullyInterleavedRayleigh, snr)
    }

    pub fn dummy() -> Self {
        Self { kind: ChannelKind::Dummy, param: 0.0 }
    }

    fn snr_channel(kind: ChannelKind, snr: f64) -> Result<Self> {
        // +inf is allowed: a noiseless channel
        if snr.is_nan() || snr < 0.0 {
            return Err(Error::Domain(format!("{} SNR {snr} must be >= 0", kind.name())));
        }
        Ok(Self { kind, param: snr })
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    /// The channel parameter; `None` for the dummy channel.
    pub fn param(&self) -> Option<f64> {
        match self.kind {
            ChannelKind::Dummy => None,
            _ => Some(self.param),
        }
    }

    /// Bhattacharyya parameter `γ = Σ_y √(p(y|0) p(y|1))`.
    pub fn bhattacharyya(&self) -> f64 {
        match self.kind {
            ChannelKind::Bec => self.param,
            ChannelKind::BiAwgn => (-self.param).exp(),
            ChannelKind::FullyInterleavedRayleigh => 1.0 / (1.0 + self.param),
            ChannelKind::Dummy => 1.0,
        }
    }

    /// Bhattacharyya rate `1 − γ`.
    pub fn bhattacharyya_rate(&self) -> f64 {
        1.0 - self.bhattacharyya()
    }

    /// Capacity in bits per channel use under uniform inputs.
    ///
    /// The fully interleaved Rayleigh channel is only characterised through
    /// `γ`, so asking for its capacity is an error.
    pub fn capacity(&self) -> Result<f64> {
        match self.kind {
            ChannelKind::Bec => Ok(1.0 - self.param),
            ChannelKind::BiAwgn => Ok(bi_awgn_capacity(self.param)),
            ChannelKind::FullyInterleavedRayleigh => {
                Err(Error::UnsupportedMeasure { measure: "capacity", channel: self.kind.name() })
            }
            ChannelKind::Dummy => Ok(0.0),
        }
    }

    /// Cutoff rate `R0 = 1 − log2(1 + γ)`.
    pub fn cutoff_rate(&self) -> f64 {
        1.0 - (1.0 + self.bhattacharyya()).log2()
    }

    pub fn measures(&self) -> Result<ChannelMeasures> {
        Ok(ChannelMeasures {
            capacity: self.capacity()?,
            bhattacharyya: self.bhattacharyya(),
            bhattacharyya_rate: self.bhattacharyya_rate(),
            cutoff_rate: self.cutoff_rate(),
        })
    }
}

/// `log2(1 + e^x)` without overflow for large `x`.
fn log2_one_plus_exp(x: f64) -> f64 {
    let nats = if x > 0.0 { x + (-x).exp().ln_1p() } else { x.exp().ln_1p() };
    nats / LN_2
}

/// Capacity of the BI-AWGN channel at linear SNR `λ`:
/// `1 − π^{-1/2} ∫ exp(−(y−√λ)²) log2(1 + exp(−4y√λ)) dy`.
pub fn bi_awgn_capacity(snr: f64) -> f64 {
    if snr == 0.0 {
        return 0.0;
    }
    if snr.is_infinite() {
        return 1.0;
    }
    let amp = snr.sqrt();
    let half_width = AWGN_TAIL_SIGMAS * std::f64::consts::FRAC_1_SQRT_2;
    let integrand = |y: f64| {
        let d = y - amp;
        (-d * d).exp() * log2_one_plus_exp(-4.0 * y * amp)
    };
    // the loss term is at most 1 and scales the tolerance directly
    // unit-width starting pieces so the rule sees the Gaussian bump
    let loss = quadrature::integrate_split(
        integrand,
        amp - half_width,
        amp + half_width,
        (2.0 * half_width).ceil() as usize,
        AWGN_CAPACITY_TOL * PI.sqrt() * 0.1,
        4096,
    );
    (1.0 - loss.value / PI.sqrt()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite trapezoid rule on the same integral, independent of the
    /// adaptive Gauss–Kronrod path.
    fn trapezoid_capacity(snr: f64, points: usize) -> f64 {
        let amp = snr.sqrt();
        let (a, b) = (amp - 30.0, amp + 30.0);
        let h = (b - a) / (points - 1) as f64;
        let f = |y: f64| {
            let d = y - amp;
            let x = -4.0 * y * amp;
            let sp = if x > 0.0 { x + (-x).exp().ln_1p() } else { x.exp().ln_1p() };
            (-d * d).exp() * sp / LN_2
        };
        let mut s = 0.5 * (f(a) + f(b));
        for i in 1..points - 1 {
            s += f(a + i as f64 * h);
        }
        1.0 - s * h / PI.sqrt()
    }

    #[test]
    fn bhattacharyya_examples() {
        assert_eq!(ChannelSpec::bec(0.3).unwrap().bhattacharyya(), 0.3);
        assert_eq!(ChannelSpec::bi_awgn(0.0).unwrap().bhattacharyya(), 1.0);
        assert_eq!(ChannelSpec::firf(1.0).unwrap().bhattacharyya(), 0.5);
        assert_eq!(ChannelSpec::dummy().bhattacharyya(), 1.0);
    }

    #[test]
    fn capacity_examples() {
        assert!((ChannelSpec::bec(0.3).unwrap().capacity().unwrap() - 0.7).abs() < 1e-15);
        assert_eq!(ChannelSpec::bi_awgn(0.0).unwrap().capacity().unwrap(), 0.0);
        assert_eq!(ChannelSpec::dummy().capacity().unwrap(), 0.0);
        let c10 = ChannelSpec::bi_awgn(10.0).unwrap().capacity().unwrap();
        let oracle = trapezoid_capacity(10.0, 1_000_000);
        assert!(c10 > 0.999);
        assert!((c10 - oracle).abs() < 1e-9, "{c10} vs {oracle}");
    }

    #[test]
    fn capacity_matches_trapezoid_across_snr() {
        for &snr in &[1e-3, 0.05, 0.5, 1.0, 2.0, 5.0] {
            let c = bi_awgn_capacity(snr);
            let oracle = trapezoid_capacity(snr, 200_001);
            assert!((c - oracle).abs() < 1e-9, "snr {snr}: {c} vs {oracle}");
        }
    }

    #[test]
    fn firf_capacity_is_unsupported() {
        let err = ChannelSpec::firf(3.0).unwrap().capacity().unwrap_err();
        assert!(matches!(err, Error::UnsupportedMeasure { .. }));
    }

    #[test]
    fn cutoff_rate_examples() {
        assert_eq!(ChannelSpec::bi_awgn(0.0).unwrap().cutoff_rate(), 0.0);
        assert_eq!(ChannelSpec::bec(1.0).unwrap().cutoff_rate(), 0.0);
        let r0 = ChannelSpec::bi_awgn(1.0).unwrap().cutoff_rate();
        assert!((r0 - (1.0 - (1.0 + (-1.0f64).exp()).log2())).abs() < 1e-15);
        assert!((r0 - 0.5479).abs() < 5e-4);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(ChannelSpec::bec(-0.1).is_err());
        assert!(ChannelSpec::bec(1.1).is_err());
        assert!(ChannelSpec::bi_awgn(-1.0).is_err());
        assert!(ChannelSpec::firf(f64::NAN).is_err());
    }

    #[test]
    fn monotone_in_parameter() {
        let mut prev_awgn = f64::INFINITY;
        let mut prev_firf = f64::INFINITY;
        let mut prev_cap = f64::INFINITY;
        for i in 0..=100 {
            let s = 10f64.powf(-3.0 + 6.0 * i as f64 / 100.0);
            let ga = ChannelSpec::bi_awgn(s).unwrap().bhattacharyya();
            let gf = ChannelSpec::firf(s).unwrap().bhattacharyya();
            assert!(ga < prev_awgn || ga == 0.0 && prev_awgn == 0.0);
            assert!(gf < prev_firf);
            prev_awgn = ga;
            prev_firf = gf;
            let c = ChannelSpec::bec(i as f64 / 100.0).unwrap().capacity().unwrap();
            assert!(c < prev_cap);
            prev_cap = c;
        }
    }

    proptest::proptest! {
        #[test]
        fn measures_are_ordered(p in 0.0f64..=1.0, log_snr in -3.0f64..3.0) {
            let snr = 10f64.powf(log_snr);
            for ch in [ChannelSpec::bec(p).unwrap(), ChannelSpec::bi_awgn(snr).unwrap()] {
                let m = ch.measures().unwrap();
                proptest::prop_assert!(m.capacity >= m.bhattacharyya_rate - 1e-9);
                proptest::prop_assert!(m.bhattacharyya_rate >= m.cutoff_rate - 1e-12);
            }
            let firf = ChannelSpec::firf(snr).unwrap();
            proptest::prop_assert!(firf.bhattacharyya_rate() >= firf.cutoff_rate());
        }

        #[test]
        fn power_of_two_is_sandwiched(b in 0.0f64..=1.0) {
            let p = 2f64.powf(b);
            proptest::prop_assert!(1.0 + b * b <= p + 1e-15);
            proptest::prop_assert!(p <= 1.0 + b + 1e-15);
        }

        #[test]
        fn reciprocal_powers_sum_below_one(a in 1e-6f64..=100.0) {
            proptest::prop_assert!(2f64.powf(-a) + 2f64.powf(-1.0 / a) <= 1.0 + 1e-15);
        }
    }
}
