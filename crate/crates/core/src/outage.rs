//! Code-outage probabilities and the frame-error-rate upper bound.
//!
//! Under threshold decoding a frame fails exactly when the slot-averaged
//! Bhattacharyya parameter `γ̄` at the destination reaches `e^{−c★}`. With
//! fading powers `ν ~ Exp(1)` this is the code outage probability
//! `G(M, F, SNR)`; averaging it over the reliable sets gives the FER bound.
//!
//! `G` is exact for `F = ∅` at any `M` and for `M = 2`, `F = {1}` (one
//! dimensional integral). Everything else is estimated by Monte Carlo with
//! per-block random streams, optionally with antithetic fading draws.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::{self, avg_bhattacharyya, link_snrs, CoopConfig, Geometry, ReliableSet};
use crate::puncturing::{is_self_decodable, punctured_threshold};
use crate::quadrature;
use crate::stats::{self, Z99};

/// Absolute accuracy of the `M = 2` outage integral.
pub const M2_QUAD_TOL: f64 = 1e-8;

/// Smallest Monte Carlo sample count accepted.
pub const MIN_SAMPLES: u64 = 10_000;

/// Asymptotic bounds above this value are flagged.
pub const ASYMPTOTIC_WARN_LEVEL: f64 = 0.1;

/// Flag: asymptotic bound evaluated far from the high-SNR regime.
pub const FLAG_NOT_ASYMPTOTIC: &str = "not-asymptotic";

/// Flag: fewer than 50 expected errors behind a simulated FER.
pub const FLAG_WEAK: &str = "statistically-weak";

/// How an FER number was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EstimateKind {
    ClosedForm,
    Quadrature,
    MonteCarloIntegral,
    Simulation,
    AsymptoticBound,
}

/// An FER value with its provenance and 99% half-width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FerEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub half_width: f64,
    pub samples: u64,
    pub flags: Vec<&'static str>,
}

impl FerEstimate {
    pub fn exact(value: f64, kind: EstimateKind) -> Self {
        Self { value, kind, half_width: 0.0, samples: 0, flags: Vec::new() }
    }

    /// One standard deviation implied by the 99% half-width.
    pub fn sigma(&self) -> f64 {
        self.half_width / Z99
    }
}

/// Monte Carlo controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McOptions {
    pub n_samples: u64,
    pub seed: u64,
    pub antithetic: bool,
    pub workers: Option<usize>,
}

impl McOptions {
    pub fn new(n_samples: u64, seed: u64) -> Self {
        Self { n_samples, seed, antithetic: false, workers: None }
    }

    pub fn antithetic(mut self, on: bool) -> Self {
        self.antithetic = on;
        self
    }

    pub fn workers(mut self, workers: Option<usize>) -> Self {
        self.workers = workers;
        self
    }
}

/// Direct transmission: `1 − e^{−c★/SNR}`.
pub fn outage_m1(c_star: f64, snr: f64) -> Result<FerEstimate> {
    if !(snr > 0.0) {
        return Err(Error::Domain(format!("SNR {snr} must be > 0")));
    }
    Ok(FerEstimate::exact(-(-c_star / snr).exp_m1(), EstimateKind::ClosedForm))
}

/// Outage of the two-slot cluster when the helper decoded:
/// `G = 1 − ω − ∫_ω^1 [(e^{−c★} − τ0 x^{SNR_02}) / τ1]^{1/SNR_12} dx`
/// with `ω = e^{−χ(τ0)/SNR_02}`.
///
/// Requires `τ0, τ1 ≤ e^{−c★}`. The bracket is clamped to `[0, 1]`, and
/// `ω = 0` when `τ0` alone is not self-decodable.
pub fn outage_m2_cooperative(c_star: f64, tau0: f64, tau1: f64, snr02: f64, snr12: f64) -> Result<FerEstimate> {
    if (tau0 + tau1 - 1.0).abs() > protocol::TAU_SUM_TOL || !(tau0 > 0.0 && tau1 > 0.0) {
        return Err(Error::InvalidConfig(format!("τ0 = {tau0}, τ1 = {tau1} must be positive and sum to 1")));
    }
    let cap = (-c_star).exp();
    if tau0 > cap || tau1 > cap {
        return Err(Error::AssumptionViolated(format!("τ0 = {tau0} and τ1 = {tau1} must not exceed e^(-c*) = {cap}")));
    }
    if !(snr02 > 0.0 && snr12 > 0.0) {
        return Err(Error::Domain("SNRs must be > 0".into()));
    }
    let omega = if is_self_decodable(c_star, tau0) { (-punctured_threshold(c_star, tau0)? / snr02).exp() } else { 0.0 };
    let inv = 1.0 / snr12;
    let integrand = |x: f64| ((cap - tau0 * x.powf(snr02)) / tau1).clamp(0.0, 1.0).powf(inv);
    let integral = quadrature::integrate(integrand, omega, 1.0, M2_QUAD_TOL, 20_000);
    let value = (1.0 - omega - integral.value).clamp(0.0, 1.0);
    Ok(FerEstimate::exact(value, EstimateKind::Quadrature))
}

/// Monte Carlo estimate of `G(M, F, SNR) = P{γ̄(ν, F) ≥ e^{−c★}}`.
///
/// `snrs` are the node-to-destination SNRs `SNR_{i,M}`, `i = 0..M-1`.
/// The half-width is the 99% Wilson interval, or a normal interval on pair
/// means with antithetic sampling.
pub fn outage_given_set(
    cfg: &CoopConfig,
    f: ReliableSet,
    snrs: &[f64],
    c_star: f64,
    opts: McOptions,
) -> Result<FerEstimate> {
    let m = cfg.m();
    protocol::schedule(f, m)?;
    if snrs.len() != m {
        return Err(Error::InvalidConfig(format!("{} destination SNRs for M = {m}", snrs.len())));
    }
    if opts.n_samples < MIN_SAMPLES {
        return Err(Error::Domain(format!("{} samples, at least {MIN_SAMPLES} required", opts.n_samples)));
    }
    let n = if opts.antithetic { opts.n_samples.div_ceil(2) } else { opts.n_samples };
    let cap = (-c_star).exp();
    let active: Vec<usize> = std::iter::once(0).chain(f.members()).collect();

    // per block: (outage count, sum of pair means, sum of squared pair means)
    let blocks = stats::run_blocks(stats::block_count(n), opts.workers, |b| {
        let mut rng = stats::block_rng(opts.seed, b);
        let mut nu = vec![0.0; m];
        let mut nu_anti = vec![0.0; m];
        let (mut hits, mut sum, mut sum_sq) = (0u64, 0.0, 0.0);
        for _ in 0..stats::block_len(n, b) {
            for &i in &active {
                let (x, y) = stats::exp_pair(stats::open_uniform(&mut rng));
                nu[i] = x;
                nu_anti[i] = y;
            }
            let a = (avg_bhattacharyya(&nu, f, cfg, snrs) >= cap) as u64;
            if opts.antithetic {
                let z = (avg_bhattacharyya(&nu_anti, f, cfg, snrs) >= cap) as u64;
                hits += a + z;
                let mean = (a + z) as f64 / 2.0;
                sum += mean;
                sum_sq += mean * mean;
            } else {
                hits += a;
            }
        }
        (hits, sum, sum_sq)
    });

    let hits: u64 = blocks.iter().map(|b| b.0).sum();
    if !opts.antithetic {
        let value = hits as f64 / n as f64;
        let half_width = stats::wilson_half_width(hits, n, Z99);
        return Ok(FerEstimate {
            value,
            kind: EstimateKind::MonteCarloIntegral,
            half_width,
            samples: n,
            flags: Vec::new(),
        });
    }
    let sum: f64 = blocks.iter().map(|b| b.1).sum();
    let sum_sq: f64 = blocks.iter().map(|b| b.2).sum();
    let pairs = n as f64;
    let value = sum / pairs;
    let var = ((sum_sq / pairs - value * value) * pairs / (pairs - 1.0)).max(0.0);
    let mut half_width = Z99 * (var / pairs).sqrt();
    if half_width == 0.0 {
        half_width = stats::wilson_half_width(hits, 2 * n, Z99);
    }
    Ok(FerEstimate { value, kind: EstimateKind::MonteCarloIntegral, half_width, samples: 2 * n, flags: Vec::new() })
}

/// Seed offset so each reliable set gets its own streams while staying
/// fixed across sweep points (common random numbers).
fn set_seed(seed: u64, f: ReliableSet) -> u64 {
    seed ^ (f.mask() as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Outage probability of one reliable set using the cheapest exact path
/// available, falling back to Monte Carlo.
pub fn outage_for_set(
    cfg: &CoopConfig,
    f: ReliableSet,
    snrs: &[f64],
    c_star: f64,
    opts: McOptions,
) -> Result<FerEstimate> {
    if f.is_empty() {
        return outage_m1(c_star, snrs[0]);
    }
    if cfg.m() == 2 {
        let (t0, t1) = (cfg.taus()[0], cfg.taus()[1]);
        let cap = (-c_star).exp();
        if t0 <= cap && t1 <= cap {
            return outage_m2_cooperative(c_star, t0, t1, snrs[0], snrs[1]);
        }
    }
    outage_given_set(cfg, f, snrs, c_star, McOptions { seed: set_seed(opts.seed, f), ..opts })
}

/// FER upper bound `Σ_F P(F) G(M, F, SNR)` for a cluster.
///
/// Reliable sets with zero probability are skipped. Half-widths add as
/// `Σ_F P(F) hw(F)`.
pub fn fer_bound(cfg: &CoopConfig, geom: &Geometry, c_star: f64, opts: McOptions) -> Result<FerEstimate> {
    let m = cfg.m();
    protocol::check_slots(m)?;
    if geom.m() != m {
        return Err(Error::InvalidConfig(format!("geometry has {} slots, config has {m}", geom.m())));
    }
    let snrs = link_snrs(geom);
    let chi0 =
        if is_self_decodable(c_star, cfg.tau0()) { punctured_threshold(c_star, cfg.tau0())? } else { f64::INFINITY };
    let probs = protocol::reliable_set_prob(cfg, &snrs.sender_to_helper, chi0)?;
    let mut total = FerEstimate::exact(0.0, EstimateKind::ClosedForm);
    for (f, p) in probs {
        if p == 0.0 {
            continue;
        }
        let g = outage_for_set(cfg, f, &snrs.to_destination, c_star, opts)?;
        total.value += p * g.value;
        total.half_width += p * g.half_width;
        total.samples += g.samples;
        total.kind = match (total.kind, g.kind) {
            (EstimateKind::MonteCarloIntegral, _) | (_, EstimateKind::MonteCarloIntegral) => {
                EstimateKind::MonteCarloIntegral
            }
            (EstimateKind::Quadrature, _) | (_, EstimateKind::Quadrature) => EstimateKind::Quadrature,
            _ => EstimateKind::ClosedForm,
        };
    }
    total.value = total.value.clamp(0.0, 1.0);
    Ok(total)
}
