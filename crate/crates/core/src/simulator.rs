//! Frame-level Monte Carlo of the cooperation protocol under threshold
//! decoding.
//!
//! Each frame draws the broadcast fading to every helper, forms the reliable
//! set from the punctured threshold `χ(τ0)`, draws the fading of every node
//! toward the destination and declares an error when `−ln γ̄ ≤ c★`.
//! Reliable helpers always decode correctly; decoding latency is zero.
//!
//! A direct-transmission baseline is evaluated on the same sender fading
//! draw as each cooperative frame (common random numbers).

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::outage::{EstimateKind, FerEstimate, FLAG_WEAK};
use crate::protocol::{avg_bhattacharyya, link_snrs, LinkSnrs, ReliableSet};
use crate::puncturing::{is_self_decodable, punctured_threshold};
use crate::scenario::Scenario;
use crate::stats::{self, Z99};

/// Smallest frame count accepted by [`simulate_fer`].
pub const MIN_FRAMES: u64 = 10_000;

/// Expected error count below which a result is flagged weak.
pub const WEAK_ERRORS: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub scenario: Scenario,
    pub n_frames: u64,
    pub seed: u64,
    /// Pair each frame with one drawn from the complementary uniforms.
    pub antithetic: bool,
    /// Worker threads; `None` uses the global pool. Results do not depend
    /// on it.
    pub workers: Option<usize>,
}

impl SimConfig {
    pub fn new(scenario: Scenario, n_frames: u64, seed: u64) -> Self {
        Self { scenario, n_frames, seed, antithetic: false, workers: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub fer: FerEstimate,
    /// Direct transmission over the sender's own fading draws.
    pub direct_fer: FerEstimate,
    pub reliable_set_histogram: BTreeMap<ReliableSet, u64>,
    pub mean_avg_bhattacharyya: f64,
}

/// Per-scenario constants shared by all frames.
#[derive(Debug, Clone)]
pub struct FrameModel<'a> {
    scenario: &'a Scenario,
    snrs: LinkSnrs,
    chi0: f64,
    cap: f64,
}

/// Outcome of one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub error: bool,
    pub reliable: ReliableSet,
    pub avg_bhattacharyya: f64,
    pub direct_error: bool,
}

impl<'a> FrameModel<'a> {
    pub fn new(scenario: &'a Scenario) -> Result<Self> {
        let c = scenario.c_star;
        let tau0 = scenario.coop.tau0();
        let chi0 = if is_self_decodable(c, tau0) { punctured_threshold(c, tau0)? } else { f64::INFINITY };
        Ok(Self { scenario, snrs: link_snrs(&scenario.geometry), chi0, cap: (-c).exp() })
    }

    /// Number of uniforms consumed per frame: one per helper link and one
    /// per node-to-destination link.
    pub fn draws(&self) -> usize {
        2 * self.scenario.m() - 1
    }

    /// Evaluates a frame from its exponential fading draws: helper links
    /// first, then node-to-destination links.
    pub fn evaluate(&self, nu: &[f64]) -> Frame {
        let m = self.scenario.m();
        let (broadcast, dest) = nu.split_at(m - 1);
        let mut mask = 0u32;
        for (k, (&v, &s)) in broadcast.iter().zip(&self.snrs.sender_to_helper).enumerate() {
            if v * s > self.chi0 {
                mask |= 1 << k;
            }
        }
        let reliable = ReliableSet::from_mask(mask);
        let g = avg_bhattacharyya(dest, reliable, &self.scenario.coop, &self.snrs.to_destination);
        Frame {
            error: g >= self.cap,
            reliable,
            avg_bhattacharyya: g,
            direct_error: dest[0] * self.snrs.to_destination[0] <= self.scenario.c_star,
        }
    }
}

/// Simulates one frame, drawing its fading from `rng`.
pub fn simulate_frame<R: Rng + ?Sized>(rng: &mut R, scenario: &Scenario) -> Result<(bool, ReliableSet)> {
    let model = FrameModel::new(scenario)?;
    let nu: Vec<f64> = (0..model.draws()).map(|_| stats::exp_pair(stats::open_uniform(rng)).0).collect();
    let f = model.evaluate(&nu);
    Ok((f.error, f.reliable))
}

/// Dense histograms are used up to this many slots.
const DENSE_HISTOGRAM_SLOTS: usize = 12;

#[derive(Debug, Clone, Default)]
struct Tally {
    errors: u64,
    direct_errors: u64,
    gamma_sum: f64,
    dense: Vec<u64>,
    sparse: BTreeMap<ReliableSet, u64>,
}

impl Tally {
    fn new(m: usize) -> Self {
        let dense = if m <= DENSE_HISTOGRAM_SLOTS { vec![0; 1 << (m - 1)] } else { Vec::new() };
        Self { dense, ..Self::default() }
    }

    fn record(&mut self, f: Frame) {
        self.errors += f.error as u64;
        self.direct_errors += f.direct_error as u64;
        self.gamma_sum += f.avg_bhattacharyya;
        if self.dense.is_empty() {
            *self.sparse.entry(f.reliable).or_insert(0) += 1;
        } else {
            self.dense[f.reliable.mask() as usize] += 1;
        }
    }

    fn histogram(&self) -> impl Iterator<Item = (ReliableSet, u64)> + '_ {
        let dense =
            self.dense.iter().enumerate().filter(|c| *c.1 > 0).map(|(k, &c)| (ReliableSet::from_mask(k as u32), c));
        dense.chain(self.sparse.iter().map(|(&f, &c)| (f, c)))
    }
}

/// FER below `50/n` is the same as fewer than 50 observed errors.
fn weak_flags(errors: u64) -> Vec<&'static str> {
    if (errors as f64) < WEAK_ERRORS {
        vec![FLAG_WEAK]
    } else {
        Vec::new()
    }
}

fn estimate(errors: u64, n: u64) -> FerEstimate {
    FerEstimate {
        value: errors as f64 / n as f64,
        kind: EstimateKind::Simulation,
        half_width: stats::wilson_half_width(errors, n, Z99),
        samples: n,
        flags: weak_flags(errors),
    }
}

/// Simulates `n_frames` frames. Identical configs give identical results
/// regardless of `workers`.
///
/// With antithetic pairing the frame count is rounded up to even and the
/// reported half-width is still the (conservative) Wilson interval.
pub fn simulate_fer(cfg: &SimConfig) -> Result<SimResult> {
    if cfg.n_frames < MIN_FRAMES {
        return Err(Error::Domain(format!("{} frames, at least {MIN_FRAMES} required", cfg.n_frames)));
    }
    let model = FrameModel::new(&cfg.scenario)?;
    let draws = model.draws();
    // frames come in antithetic pairs when requested; blocks count units
    let per_unit = if cfg.antithetic { 2 } else { 1 };
    let units = cfg.n_frames.div_ceil(per_unit);
    let n = units * per_unit;

    let tallies = stats::run_blocks(stats::block_count(units), cfg.workers, |b| {
        let mut rng = stats::block_rng(cfg.seed, b);
        let mut nu = vec![0.0; draws];
        let mut anti = vec![0.0; draws];
        let mut t = Tally::new(cfg.scenario.m());
        for _ in 0..stats::block_len(units, b) {
            for k in 0..draws {
                let (x, y) = stats::exp_pair(stats::open_uniform(&mut rng));
                nu[k] = x;
                anti[k] = y;
            }
            t.record(model.evaluate(&nu));
            if cfg.antithetic {
                t.record(model.evaluate(&anti));
            }
        }
        t
    });

    let (mut errors, mut direct_errors, mut gamma_sum) = (0, 0, 0.0);
    let mut histogram = BTreeMap::new();
    for t in &tallies {
        errors += t.errors;
        direct_errors += t.direct_errors;
        gamma_sum += t.gamma_sum;
        for (f, c) in t.histogram() {
            *histogram.entry(f).or_insert(0) += c;
        }
    }
    Ok(SimResult {
        fer: estimate(errors, n),
        direct_fer: estimate(direct_errors, n),
        reliable_set_histogram: histogram,
        mean_avg_bhattacharyya: gamma_sum / n as f64,
    })
}

/// Reliable transmission on the fully interleaved Rayleigh channel:
/// `1/(1 + η) < e^{−c★}`, i.e. `η > e^{c★} − 1`.
pub fn simulate_firf_threshold(c_star: f64, eta: f64) -> Result<bool> {
    if !(eta >= 0.0) {
        return Err(Error::Domain(format!("SNR {eta} must be >= 0")));
    }
    Ok(eta > c_star.exp_m1())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::outage::outage_m1;
    use crate::protocol::reliable_set_prob;

    #[test]
    fn zero_threshold_means_everyone_decodes() {
        // χ(τ0)/ρ vanishes for a huge sender-to-helper SNR
        let s = Scenario::symmetric(4, 1e300, 1.0, 1.0, 0.17).unwrap();
        let mut rng = stats::block_rng(0, 0);
        for _ in 0..1000 {
            let (_, f) = simulate_frame(&mut rng, &s).unwrap();
            assert_eq!(f, ReliableSet::full(4));
        }
    }

    #[test]
    fn single_slot_matches_closed_form() {
        let s = Scenario::symmetric(1, 1.0, 3.0, 3.0, 0.17).unwrap();
        let r = simulate_fer(&SimConfig::new(s, 200_000, 4)).unwrap();
        let exact = outage_m1(0.17, 3.0).unwrap().value;
        assert!((r.fer.value - exact).abs() < r.fer.half_width);
        assert_eq!(r.fer.value, r.direct_fer.value);
    }

    #[test]
    fn deterministic_and_worker_independent() {
        let s = Scenario::symmetric(3, 1.0, 2.0, 2.0, 0.17).unwrap();
        let mut cfg = SimConfig::new(s, 50_000, 9);
        cfg.workers = Some(1);
        let a = simulate_fer(&cfg).unwrap();
        cfg.workers = Some(3);
        let b = simulate_fer(&cfg).unwrap();
        assert_eq!(a, b);
        let mut r1 = stats::block_rng(5, 0);
        let mut r2 = stats::block_rng(5, 0);
        for _ in 0..100 {
            assert_eq!(
                simulate_frame(&mut r1, &cfg.scenario).unwrap(),
                simulate_frame(&mut r2, &cfg.scenario).unwrap()
            );
        }
    }

    #[test]
    fn histogram_matches_set_probabilities() {
        let s = Scenario::symmetric(3, 1.5, 2.0, 2.0, 0.17).unwrap();
        let n = 200_000;
        let mut cfg = SimConfig::new(s.clone(), n, 2);
        cfg.antithetic = true;
        let r = simulate_fer(&cfg).unwrap();
        assert_eq!(r.reliable_set_histogram.values().sum::<u64>(), n);
        let chi0 = punctured_threshold(0.17, 1.0 / 3.0).unwrap();
        for (f, p) in reliable_set_prob(&s.coop, &link_snrs(&s.geometry).sender_to_helper, chi0).unwrap() {
            let count = *r.reliable_set_histogram.get(&f).unwrap_or(&0) as f64;
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((count - n as f64 * p).abs() < 4.0 * sd, "{f}: {count} vs {}", n as f64 * p);
        }
    }

    #[test]
    fn cooperation_beats_direct_transmission() {
        let s = Scenario::symmetric(3, 4.0, 4.0, 4.0, 0.17).unwrap();
        let r = simulate_fer(&SimConfig::new(s, 100_000, 3)).unwrap();
        assert!(r.fer.value < r.direct_fer.value);
    }

    #[test]
    fn weak_flag() {
        let s = Scenario::symmetric(1, 1.0, 1e6, 1e6, 0.17).unwrap();
        let r = simulate_fer(&SimConfig::new(s, MIN_FRAMES, 1)).unwrap();
        assert_eq!(r.fer.flags, vec![FLAG_WEAK]);
    }

    #[test]
    fn firf_threshold_examples() {
        assert!(!simulate_firf_threshold(0.17, 0.17f64.exp_m1()).unwrap());
        assert!(simulate_firf_threshold(0.17, 0.2).unwrap());
        assert!(!simulate_firf_threshold(0.17, 0.1).unwrap());
    }
}
