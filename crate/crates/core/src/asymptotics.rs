//! High-SNR FER bounds, diversity slope fits and the cooperative coding gain.
//!
//! The bounds depend on the cluster only through the hop profile `(r, d, D)`,
//! the path-loss exponent `L` and the symbol energy `E`; all of them decay as
//! `E^{−M}`.

use crate::error::{Error, Result};
use crate::outage::{EstimateKind, FerEstimate, ASYMPTOTIC_WARN_LEVEL, FLAG_NOT_ASYMPTOTIC};
use crate::protocol::{self, CoopConfig, Geometry, ReliableSet};
use crate::puncturing::punctured_threshold;

/// The three limiting cluster geometries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    /// Helpers next to the sender (`r → 0`).
    TransmitterClustering,
    /// Helpers next to the destination (`d → 0`).
    ReceiverClustering,
    /// General `(r, d, D)` cluster.
    ClusterHopping,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `(1/Q!) Π_m ln[τ_m / (c − (1 − τ_m))]`, an upper bound on the high-SNR
/// limit of `Π λ_m · P{Σ τ_m φ_m > c}` for `φ_m = e^{−ν_m λ_m}`.
pub fn theorem3_rhs(taus: &[f64], c: f64) -> Result<f64> {
    if taus.is_empty() {
        return Err(Error::HypothesisViolated("no weights".into()));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::HypothesisViolated(format!("c = {c} not in (0, 1)")));
    }
    let sum: f64 = taus.iter().sum();
    if (sum - 1.0).abs() > protocol::TAU_SUM_TOL {
        return Err(Error::HypothesisViolated(format!("weights sum to {sum}, not 1")));
    }
    if let Some(t) = taus.iter().find(|&&t| !(t > 1.0 - c)) {
        return Err(Error::HypothesisViolated(format!("weight {t} does not exceed 1 - c = {}", 1.0 - c)));
    }
    let prod: f64 = taus.iter().map(|&t| (t / (c - (1.0 - t))).ln()).product();
    Ok(prod / factorial(taus.len()))
}

fn chi(c_star: f64, tau: f64) -> Result<f64> {
    punctured_threshold(c_star, tau).map_err(|e| Error::HypothesisViolated(e.to_string()))
}

fn require_self_decodable(cfg: &CoopConfig, c_star: f64) -> Result<()> {
    if cfg.all_self_decodable(c_star) {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(format!(
            "assignment rates {:?} are not all self-decodable at c* = {c_star}",
            cfg.taus()
        )))
    }
}

fn check_geometry(cfg: &CoopConfig, geom: &Geometry) -> Result<()> {
    if geom.m() != cfg.m() {
        return Err(Error::InvalidGeometry(format!("geometry has {} slots, config has {}", geom.m(), cfg.m())));
    }
    Ok(())
}

/// Per reliable set: `|F|`, `Σ_F τ_i` and `Π_F τ_i`.
fn set_terms(cfg: &CoopConfig, f: ReliableSet) -> (usize, f64, f64) {
    let taus = cfg.taus();
    let k = f.len();
    let prod = f.members().map(|j| taus[j]).product();
    (k, cfg.sender_share(f), prod)
}

fn bound(value: f64) -> FerEstimate {
    let mut est = FerEstimate::exact(value, EstimateKind::AsymptoticBound);
    if value > ASYMPTOTIC_WARN_LEVEL {
        est.flags.push(FLAG_NOT_ASYMPTOTIC);
    }
    est
}

/// Asymptotic FER bound for one of the limiting geometries.
///
/// Transmitter clustering uses only `D`; receiver clustering uses only `D`
/// and `χ(τ0)`; cluster hopping sums over all reliable sets with the
/// distance factor `(r^{M−|F|−1} d^{|F|} D)^L`.
pub fn fer_asym(kind: ScenarioKind, cfg: &CoopConfig, geom: &Geometry, c_star: f64) -> Result<FerEstimate> {
    check_geometry(cfg, geom)?;
    protocol::check_slots(cfg.m())?;
    let m = cfg.m();
    let (l, e) = (geom.path_loss(), geom.symbol_energy());
    let p = geom.hop_profile();
    let scale = p.big_d.powf(m as f64 * l) / e.powi(m as i32);
    let value = match kind {
        ScenarioKind::TransmitterClustering => {
            let prod = cfg.taus().iter().map(|&t| chi(c_star, t)).product::<Result<f64>>()?;
            scale * prod / factorial(m)
        }
        ScenarioKind::ReceiverClustering => {
            require_self_decodable(cfg, c_star)?;
            scale * chi(c_star, cfg.tau0())?.powi(m as i32 - 1) * c_star
        }
        ScenarioKind::ClusterHopping => {
            require_self_decodable(cfg, c_star)?;
            let chi0 = chi(c_star, cfg.tau0())?;
            let mut sum = 0.0;
            for f in ReliableSet::all(m)? {
                let (k, share, _) = set_terms(cfg, f);
                let helpers: f64 = f.members().map(|j| chi(c_star, cfg.taus()[j])).product::<Result<f64>>()?;
                let coef = chi0.powi((m - k - 1) as i32) * chi(c_star, share)? / factorial(k + 1) * helpers;
                sum += coef * distance_factor(p.r, p.d, p.big_d, l, m, k);
            }
            sum / e.powi(m as i32)
        }
    };
    Ok(bound(value))
}

/// `(r^{M−k−1} d^k D)^L`.
fn distance_factor(r: f64, d: f64, big_d: f64, l: f64, m: usize, k: usize) -> f64 {
    (r.powi((m - k - 1) as i32) * d.powi(k as i32) * big_d).powf(l)
}

/// Small-`c★` form of the cluster-hopping bound, with `χ(τ)` replaced by
/// `c★/τ`.
pub fn fer_asym_small_cstar(cfg: &CoopConfig, geom: &Geometry, c_star: f64) -> Result<FerEstimate> {
    check_geometry(cfg, geom)?;
    protocol::check_slots(cfg.m())?;
    require_self_decodable(cfg, c_star)?;
    let m = cfg.m();
    let (l, e) = (geom.path_loss(), geom.symbol_energy());
    let p = geom.hop_profile();
    let tau0 = cfg.tau0();
    let mut sum = 0.0;
    for f in ReliableSet::all(m)? {
        let (k, share, prod) = set_terms(cfg, f);
        let denom = tau0.powi((m - k - 1) as i32) * share * prod * factorial(k + 1);
        sum += distance_factor(p.r, p.d, p.big_d, l, m, k) / denom;
    }
    Ok(bound(c_star.powi(m as i32) * sum / e.powi(m as i32)))
}

/// Least-squares slope of `−log FER` against `log SNR` over the highest
/// decade of the curve.
pub fn diversity_estimate(curve: &[(f64, f64)]) -> Result<f64> {
    if curve.len() < 4 {
        return Err(Error::InsufficientRange(format!("{} points, at least 4 required", curve.len())));
    }
    if let Some(&(s, v)) = curve.iter().find(|&&(s, v)| !(s > 0.0 && s.is_finite() && v > 0.0 && v.is_finite())) {
        return Err(Error::InsufficientRange(format!("point ({s}, {v}) needs positive finite SNR and FER")));
    }
    let lo = curve.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = curve.iter().map(|p| p.0).fold(0.0, f64::max);
    if hi / lo < 100.0 * (1.0 - 1e-9) {
        return Err(Error::InsufficientRange(format!(
            "SNR spans {:.3} decades, at least 2 required",
            (hi / lo).log10()
        )));
    }
    let top: Vec<(f64, f64)> =
        curve.iter().filter(|p| p.0 >= hi / 10.0 * (1.0 - 1e-12)).map(|&(s, v)| (s.log10(), -v.log10())).collect();
    if top.len() < 2 {
        return Err(Error::InsufficientRange("fewer than 2 points in the top decade".into()));
    }
    let n = top.len() as f64;
    let mx = top.iter().map(|p| p.0).sum::<f64>() / n;
    let my = top.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = top.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = top.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Lower bound on `c★ · cop^{(M)}`:
/// `{Σ_F [(r/D)^{M−|F|−1}(d/D)^{|F|}]^L / [τ0^{M−|F|−1}(1 − Σ_F τ)(Π_F τ)(|F|+1)!]}^{−1/M}`.
pub fn coding_gain_bound(cfg: &CoopConfig, geom: &Geometry, c_star: f64) -> Result<f64> {
    check_geometry(cfg, geom)?;
    protocol::check_slots(cfg.m())?;
    require_self_decodable(cfg, c_star)?;
    let m = cfg.m();
    let p = geom.hop_profile();
    let (kr, kd) = (p.r / p.big_d, p.d / p.big_d);
    let tau0 = cfg.tau0();
    let mut sum = 0.0;
    for f in ReliableSet::all(m)? {
        let (k, share, prod) = set_terms(cfg, f);
        let num = (kr.powi((m - k - 1) as i32) * kd.powi(k as i32)).powf(geom.path_loss());
        sum += num / (tau0.powi((m - k - 1) as i32) * share * prod * factorial(k + 1));
    }
    Ok(sum.powf(-1.0 / m as f64))
}
