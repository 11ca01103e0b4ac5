//! Asymptotic weight spectra of good binary code ensembles and the code
//! thresholds derived from them.
//!
//! A spectrum is the normalized exponent `r(δ) = limsup ln(A_h)/N` sampled on
//! a grid of normalized weights `δ = h/N`, together with the code rate. It is
//! interpolated piecewise-linearly between samples; nothing below the first
//! sample is considered (vanishing-weight codewords are assumed negligible
//! for good ensembles, which a sampled spectrum cannot verify).
//!
//! Units follow the usual mixed convention: exponents and thresholds in nats,
//! the Shulman–Feder distances `ξ` in bits.
//!
//! Suprema are taken exactly for the interpolant. On a linear piece
//! `r = a + bδ` the ratio `r/δ = a/δ + b` is monotone, and `r − r_RB` is
//! convex because the binary entropy is concave, so every supremum over an
//! interval is attained at a sample inside it or at one of its end points.

use std::f64::consts::{LN_2, LOG2_E};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum number of samples in a spectrum.
pub const MIN_SAMPLES: usize = 16;

/// Slack allowed when checking `c0 >= -ln(1-R)` on loaded spectra.
pub const RATE_BOUND_SLACK: f64 = 1e-9;

/// Coarse grid used when searching the weight partition parameter.
pub const PARTITION_GRID: usize = 512;

/// Binary entropy in nats, with `H(0) = H(1) = 0`.
pub fn binary_entropy(delta: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.ln() };
    term(delta) + term(1.0 - delta)
}

/// Spectrum exponent of the random binary ensemble,
/// `r_RB(δ) = H(δ) − (1 − R) ln 2`.
pub fn random_binary_exponent(rate: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("normalized weight {delta} not in (0, 1]")));
    }
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::Domain(format!("code rate {rate} not in (0, 1)")));
    }
    Ok(rb_exponent(rate, delta))
}

fn rb_exponent(rate: f64, delta: f64) -> f64 {
    binary_entropy(delta) - (1.0 - rate) * LN_2
}

/// Sampled asymptotic weight spectrum of one code ensemble.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSpectrum {
    label: String,
    rate: f64,
    deltas: Vec<f64>,
    exponents: Vec<f64>,
}

/// The UB threshold, the simple threshold and the partition achieving it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeThresholds {
    pub c0: f64,
    pub c_star: f64,
    pub p_star: f64,
}

/// On-disk form: `{"label": str, "rate": float, "samples": [[delta, r], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    pub label: String,
    pub rate: f64,
    pub samples: Vec<[f64; 2]>,
}

impl WeightSpectrum {
    /// Builds a spectrum, enforcing the sample-grid invariants.
    pub fn new(label: impl Into<String>, rate: f64, samples: &[(f64, f64)]) -> Result<Self> {
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::Malformed(format!("rate {rate} not in (0, 1)")));
        }
        if samples.len() < MIN_SAMPLES {
            return Err(Error::Malformed(format!("{} samples given, at least {MIN_SAMPLES} required", samples.len())));
        }
        let (deltas, exponents): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        if !(deltas[0] > 0.0) {
            return Err(Error::Malformed(format!("first weight {} must be > 0", deltas[0])));
        }
        if let Some(w) = deltas.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::Malformed(format!("weights must be strictly increasing ({} then {})", w[0], w[1])));
        }
        if deltas[deltas.len() - 1] != 1.0 {
            return Err(Error::Malformed("last weight must be exactly 1".into()));
        }
        if let Some(r) = exponents.iter().find(|r| !r.is_finite()) {
            return Err(Error::Malformed(format!("non-finite exponent {r}")));
        }
        Ok(Self { label: label.into(), rate, deltas, exponents })
    }

    /// Random binary ensemble sampled at `δ = k/n`, `k = 1..=n`.
    pub fn random_binary(rate: f64, n: usize) -> Result<Self> {
        let samples: Vec<(f64, f64)> = (1..=n)
            .map(|k| {
                let d = k as f64 / n as f64;
                (d, rb_exponent(rate, d))
            })
            .collect();
        Self::new(format!("random binary, R = {rate}"), rate, &samples)
    }

    pub fn from_file_repr(file: SpectrumFile) -> Result<Self> {
        let samples: Vec<(f64, f64)> = file.samples.iter().map(|s| (s[0], s[1])).collect();
        Self::new(file.label, file.rate, &samples)
    }

    pub fn to_file_repr(&self) -> SpectrumFile {
        SpectrumFile {
            label: self.label.clone(),
            rate: self.rate,
            samples: self.samples().map(|(d, r)| [d, r]).collect(),
        }
    }

    /// Parses a spectrum from JSON and applies the rate lower-bound check.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpectrumFile = serde_json::from_str(text)?;
        let spectrum = Self::from_file_repr(file)?;
        spectrum.check_rate_bound()?;
        Ok(spectrum)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_repr()).expect("spectrum serializes")
    }

    /// Rejects spectra whose UB threshold falls below `-ln(1-R)`; no good
    /// ensemble can do that.
    pub fn check_rate_bound(&self) -> Result<()> {
        let c0 = self.ub_threshold();
        let bound = -(1.0 - self.rate).ln();
        if c0 < bound - RATE_BOUND_SLACK {
            return Err(Error::RateBoundViolated { c0, bound });
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.deltas.iter().copied().zip(self.exponents.iter().copied())
    }

    pub fn min_delta(&self) -> f64 {
        self.deltas[0]
    }

    /// Piecewise-linear `r(δ)`; `None` outside `[δ_1, 1]`.
    pub fn exponent_at(&self, delta: f64) -> Option<f64> {
        let d = &self.deltas;
        if !(delta >= d[0] && delta <= 1.0) {
            return None;
        }
        let i = d.partition_point(|&x| x < delta);
        if d[i] == delta {
            return Some(self.exponents[i]);
        }
        let (d0, d1) = (d[i - 1], d[i]);
        let (r0, r1) = (self.exponents[i - 1], self.exponents[i]);
        let t = (delta - d0) / (d1 - d0);
        Some(r0 + t * (r1 - r0))
    }

    /// Gap to the random binary ensemble at `δ`, in bits.
    fn gap_bits(&self, delta: f64, r: f64) -> f64 {
        (r - rb_exponent(self.rate, delta)) * LOG2_E
    }

    /// Candidate points (δ, r) of the interpolant restricted to `[lo, hi]`:
    /// samples inside plus both end points.
    fn candidates(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let lo = lo.max(self.deltas[0]);
        let hi = hi.min(1.0);
        if lo > hi {
            return Vec::new();
        }
        let mut pts: Vec<(f64, f64)> = self.samples().filter(|&(d, _)| d >= lo && d <= hi).collect();
        for end in [lo, hi] {
            if let Some(r) = self.exponent_at(end) {
                pts.push((end, r));
            }
        }
        pts
    }

    fn sup_ratio(&self, lo: f64, hi: f64) -> f64 {
        self.candidates(lo, hi).into_iter().map(|(d, r)| r / d).fold(f64::NEG_INFINITY, f64::max)
    }

    fn sup_gap(&self, lo: f64, hi: f64) -> f64 {
        self.candidates(lo, hi).into_iter().map(|(d, r)| self.gap_bits(d, r)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Shulman–Feder distance `ξ = sup_δ [r(δ) − r_RB(δ)] log2 e`, in bits.
    pub fn sf_distance(&self) -> f64 {
        self.samples().map(|(d, r)| self.gap_bits(d, r)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// UB code threshold `c0 = sup_δ r(δ)/δ`, in nats.
    pub fn ub_threshold(&self) -> f64 {
        self.samples().map(|(d, r)| r / d).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Restricted UB threshold `c_P` over `Ψ(P) = (0, ½−P] ∪ (½+P, 1]` and
    /// restricted SF distance `ξ_P` over `Ψᶜ(P) = (½−P, ½+P]`.
    ///
    /// A sup over an empty part of the sampled range is `-inf`. `ξ_0 = 0`.
    pub fn restricted_quantities(&self, p: f64) -> Result<(f64, f64)> {
        if !(0.0..0.5).contains(&p) {
            return Err(Error::Domain(format!("partition parameter {p} not in [0, 0.5)")));
        }
        Ok(self.restricted_unchecked(p))
    }

    fn restricted_unchecked(&self, p: f64) -> (f64, f64) {
        if p == 0.0 {
            return (self.ub_threshold(), 0.0);
        }
        let c_p = self.sup_ratio(0.0, 0.5 - p).max(self.sup_ratio(0.5 + p, 1.0));
        let xi_p = self.sup_gap(0.5 - p, 0.5 + p);
        (c_p, xi_p)
    }

    /// Sup of the spectrum gap over `Ψ(P)`, the complement of the set used by
    /// `ξ_P`. Together they recover the unrestricted SF distance.
    pub fn gap_outside_partition(&self, p: f64) -> Result<f64> {
        if !(0.0..0.5).contains(&p) {
            return Err(Error::Domain(format!("partition parameter {p} not in [0, 0.5)")));
        }
        Ok(self.sup_gap(0.0, 0.5 - p).max(self.sup_gap(0.5 + p, 1.0)))
    }

    /// `c_P >= -ln(1 - R - ξ_P)`, with the right side infinite once
    /// `ξ_P >= 1 - R`.
    fn feasible(&self, c_p: f64, xi_p: f64) -> bool {
        let slack = 1.0 - self.rate - xi_p;
        slack > 0.0 && c_p >= -slack.ln()
    }

    /// Simple code threshold: the smallest `c_P` over partitions satisfying
    /// the rate constraint, with the minimizing `P` (smallest on ties).
    ///
    /// `c_P` is non-increasing and `ξ_P` non-decreasing in `P`, so the
    /// feasible partitions form an interval starting at 0 and the optimum sits
    /// on its right edge. The edge is bracketed on a coarse grid and then
    /// located by bisection.
    pub fn simple_threshold(&self) -> Result<CodeThresholds> {
        let c0 = self.ub_threshold();
        if !self.feasible(c0, 0.0) {
            return Err(Error::InfeasibleSpectrum(format!(
                "P = 0 violates the rate constraint (c0 = {c0}, R = {})",
                self.rate
            )));
        }
        let grid: Vec<f64> = (0..PARTITION_GRID).map(|i| 0.5 * i as f64 / PARTITION_GRID as f64).collect();
        let mut candidates: Vec<(f64, f64)> = Vec::with_capacity(PARTITION_GRID + 64);
        let mut last_feasible = None;
        for (i, &p) in grid.iter().enumerate() {
            let (c_p, xi_p) = self.restricted_unchecked(p);
            if self.feasible(c_p, xi_p) {
                candidates.push((p, c_p));
                last_feasible = Some(i);
            }
        }
        let edge = last_feasible.expect("P = 0 is feasible");
        if edge + 1 < PARTITION_GRID {
            let (mut lo, mut hi) = (grid[edge], grid[edge + 1]);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let (c_p, xi_p) = self.restricted_unchecked(mid);
                if self.feasible(c_p, xi_p) {
                    candidates.push((mid, c_p));
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let c_star = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
        let p_star = candidates.iter().filter(|c| c.1 == c_star).map(|c| c.0).fold(f64::INFINITY, f64::min);
        Ok(CodeThresholds { c0, c_star, p_star })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(a: f64, rate: f64) -> WeightSpectrum {
        let s: Vec<(f64, f64)> = (1..=64).map(|k| (k as f64 / 64.0, a * k as f64 / 64.0)).collect();
        WeightSpectrum::new("linear", rate, &s).unwrap()
    }

    /// `ln C(n, k)` by exact summation of `ln((n-k+i)/i)`, no Stirling.
    fn ln_binomial(n: u64, k: u64) -> f64 {
        (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
    }

    /// Brute-force maximization on a uniform grid of the interpolant.
    fn grid_max(s: &WeightSpectrum, lo: f64, hi: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
        let n = 100_000;
        (0..=n)
            .map(|i| lo + (hi - lo) * i as f64 / n as f64)
            .filter_map(|d| s.exponent_at(d).map(|r| f(d, r)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn synthetic_r17() -> WeightSpectrum {
        let rate = 1.0 / 7.0;
        let s: Vec<(f64, f64)> = (1..=200)
            .map(|k| {
                let d = k as f64 / 200.0;
                let bump = 0.02 * (-((d - 0.4) / 0.08).powi(2)).exp();
                (d, rb_exponent(rate, d) + bump)
            })
            .collect();
        WeightSpectrum::new("synthetic", rate, &s).unwrap()
    }

    #[test]
    fn random_binary_exponent_examples() {
        for &rate in &[0.1, 0.5, 0.9] {
            let v = random_binary_exponent(rate, 0.5).unwrap();
            assert!((v - rate * LN_2).abs() < 1e-15);
        }
        let v = random_binary_exponent(0.5, 1.0).unwrap();
        assert!((v + 0.5 * LN_2).abs() < 1e-15);
        assert!(random_binary_exponent(0.5, 0.0).is_err());
        assert!(random_binary_exponent(0.5, 1.5).is_err());
    }

    #[test]
    fn random_binary_exponent_matches_exact_count() {
        let rate = 1.0 / 7.0;
        let (n, h) = (10_000u64, 1_000u64);
        let exact = (ln_binomial(n, h) - (1.0 - rate) * n as f64 * LN_2) / n as f64;
        let closed = random_binary_exponent(rate, 0.1).unwrap();
        assert!(((closed - exact) / exact).abs() < 0.01, "{closed} vs {exact}");
    }

    #[test]
    fn sf_distance_examples() {
        let rb = WeightSpectrum::random_binary(0.5, 128).unwrap();
        assert_eq!(rb.sf_distance(), 0.0);
        let shifted: Vec<(f64, f64)> = rb.samples().map(|(d, r)| (d, r + 0.1)).collect();
        let shifted = WeightSpectrum::new("shifted", 0.5, &shifted).unwrap();
        assert!((shifted.sf_distance() - 0.1 * LOG2_E).abs() < 1e-12);

        let syn = synthetic_r17();
        let oracle = grid_max(&syn, syn.min_delta(), 1.0, |d, r| (r - rb_exponent(syn.rate, d)) * LOG2_E);
        let xi = syn.sf_distance();
        assert!(xi >= oracle - 1e-12 && xi - oracle < 1e-4, "{xi} vs {oracle}");
    }

    #[test]
    fn ub_threshold_examples() {
        assert!((linear(0.8, 0.5).ub_threshold() - 0.8).abs() < 1e-12);
        let rb = WeightSpectrum::random_binary(0.5, 4096).unwrap();
        let oracle = grid_max(&rb, rb.min_delta(), 1.0, |d, r| r / d);
        let c0 = rb.ub_threshold();
        assert!(c0 >= oracle - 1e-12 && c0 - oracle < 1e-4, "{c0} vs {oracle}");
        assert!(c0 >= LN_2);
        // continuum optimum at δ = 1 - 2^{-1/2}, c0 = ln((1-δ)/δ)
        let d = 1.0 - 0.5f64.sqrt();
        assert!((c0 - ((1.0 - d) / d).ln()).abs() < 1e-6);
    }

    #[test]
    fn restricted_quantities_examples() {
        let rb = WeightSpectrum::random_binary(0.5, 1000).unwrap();
        assert_eq!(rb.restricted_quantities(0.0).unwrap(), (rb.ub_threshold(), 0.0));
        let lin = linear(0.8, 0.5);
        for &p in &[0.0, 0.1, 0.3, 0.49] {
            assert!((lin.restricted_quantities(p).unwrap().0 - 0.8).abs() < 1e-12);
        }
        assert!(rb.restricted_quantities(0.5).is_err());
        assert!(rb.restricted_quantities(-0.1).is_err());

        let syn = synthetic_r17();
        let p = 0.25;
        let (c_p, xi_p) = syn.restricted_quantities(p).unwrap();
        let lo = grid_max(&syn, syn.min_delta(), 0.5 - p, |d, r| r / d);
        let hi = grid_max(&syn, 0.5 + p, 1.0, |d, r| r / d);
        let xi = grid_max(&syn, 0.5 - p, 0.5 + p, |d, r| (r - rb_exponent(syn.rate, d)) * LOG2_E);
        let grid = lo.max(hi);
        assert!(c_p >= grid - 1e-12 && c_p - grid < 1e-4, "{c_p} vs {grid}");
        assert!(xi_p >= xi - 1e-12 && xi_p - xi < 1e-4, "{xi_p} vs {xi}");
    }

    #[test]
    fn simple_threshold_of_random_binary() {
        let rb = WeightSpectrum::random_binary(0.5, 2048).unwrap();
        let t = rb.simple_threshold().unwrap();
        // exhaustive constrained minimization over 10^4 partitions
        let oracle = (0..10_000)
            .map(|i| 0.5 * i as f64 / 10_000.0)
            .map(|p| rb.restricted_unchecked(p))
            .filter(|&(c, x)| rb.feasible(c, x))
            .map(|(c, _)| c)
            .fold(f64::INFINITY, f64::min);
        assert!(t.c_star <= oracle + 1e-12);
        assert!(oracle - t.c_star < 1e-3);
        assert!((t.c_star - LN_2).abs() < 1e-9, "{}", t.c_star);
        assert!(t.c_star <= t.c0);
    }

    #[test]
    fn simple_threshold_of_linear_spectrum() {
        let lin = linear(0.8, 0.5);
        let t = lin.simple_threshold().unwrap();
        assert!((t.c_star - 0.8).abs() < 1e-12);
        assert_eq!(t.p_star, 0.0);
    }

    #[test]
    fn infeasible_when_rate_bound_fails() {
        let lin = linear(0.5, 0.5);
        assert!(matches!(lin.simple_threshold(), Err(Error::InfeasibleSpectrum(_))));
        assert!(matches!(lin.check_rate_bound(), Err(Error::RateBoundViolated { .. })));
    }

    #[test]
    fn invariants_on_partition_grid() {
        let syn = synthetic_r17();
        let mut prev = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 1..500 {
            let p = 0.5 * i as f64 / 500.0;
            let (c_p, xi_p) = syn.restricted_quantities(p).unwrap();
            assert!(c_p <= prev.0 + 1e-15);
            assert!(xi_p >= prev.1 - 1e-15);
            let outside = syn.gap_outside_partition(p).unwrap();
            assert!((syn.sf_distance() - xi_p.max(outside)).abs() < 1e-12);
            prev = (c_p, xi_p);
        }
    }

    #[test]
    fn loader_rejects_bad_grids() {
        let good = WeightSpectrum::random_binary(0.5, 32).unwrap().to_file_repr();
        let mut unsorted = good.clone();
        unsorted.samples.swap(3, 4);
        assert!(WeightSpectrum::from_file_repr(unsorted).is_err());
        let mut short = good.clone();
        short.samples.drain(0..20);
        assert!(WeightSpectrum::from_file_repr(short).is_err());
        let mut no_end = good.clone();
        no_end.samples.pop();
        assert!(WeightSpectrum::from_file_repr(no_end).is_err());
        assert!(WeightSpectrum::from_json(r#"{"label":"x","rate":0.5,"samples":[],"extra":1}"#).is_err());
        let json = WeightSpectrum::random_binary(0.5, 32).unwrap().to_json();
        assert_eq!(WeightSpectrum::from_json(&json).unwrap().samples().count(), 32);
    }
}
