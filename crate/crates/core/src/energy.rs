//! ε-achievable transmission energy and energy savings of cooperation.
//!
//! Energies follow from setting an asymptotic FER bound equal to the target
//! `ε` and solving for the symbol energy `E`. Savings are ratios to the direct
//! transmission energy `E1 = c★ D^L / ε`; in them `c★` and `D` cancel.

use crate::error::{Error, Result};
use crate::puncturing::self_decodable_limit;

/// Margin by which `τ0` and `τ†` must clear the self-decodable limit.
pub const TAU_GUARDBAND: f64 = 1e-9;

/// Coarse grid size for [`optimize_tau0`].
const TAU_GRID: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyQuery {
    pub epsilon: f64,
    pub m: usize,
    pub path_loss: f64,
    pub distance: f64,
    /// Normalized sender-to-cluster distance `r/D`, for the κ-sweep.
    pub kappa: Option<f64>,
    pub c_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnergyMode {
    Direct,
    /// Stirling form of the transmitter-clustering energy.
    TransmitterClustering,
    /// Transmitter-clustering energy solved with the exact `M!`.
    TransmitterClusteringExact,
    /// Reliable-transmission energy on the fully interleaved Rayleigh channel.
    Firf,
    /// Collinear cluster at `r = κD`, `d = (1 − κ)D`, split `τ0` / `τ†`.
    KappaHopping,
}

impl EnergyQuery {
    pub fn new(epsilon: f64, m: usize, c_star: f64) -> Self {
        Self { epsilon, m, path_loss: 3.0, distance: 1.0, kappa: None, c_star }
    }

    pub fn with_kappa(mut self, kappa: f64) -> Self {
        self.kappa = Some(kappa);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Domain(format!("target FER {} not in (0, 1)", self.epsilon)));
        }
        if self.m == 0 {
            return Err(Error::Domain("M must be >= 1".into()));
        }
        if !(self.path_loss > 0.0 && self.distance > 0.0) {
            return Err(Error::Domain("path loss and distance must be positive".into()));
        }
        if !(self.c_star > 0.0) {
            return Err(Error::Domain(format!("threshold {} must be > 0", self.c_star)));
        }
        Ok(())
    }

    fn kappa(&self) -> Result<f64> {
        match self.kappa {
            Some(k) if k > 0.0 && k < 1.0 => Ok(k),
            Some(k) => Err(Error::Domain(format!("κ = {k} not in (0, 1)"))),
            None => Err(Error::Domain("κ is required for this mode".into())),
        }
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// `Σ_k C(M−1,k) κ^{L(M−k−1)} (1−κ)^{Lk} / [τ0^{M−k−1} τ†^k (1 − kτ†) (k+1)!]`.
fn kappa_sum(m: usize, l: f64, kappa: f64, tau0: f64) -> f64 {
    let dagger = (1.0 - tau0) / (m - 1) as f64;
    (0..m)
        .map(|k| {
            let num = binomial(m - 1, k) * kappa.powf(l * (m - k - 1) as f64) * (1.0 - kappa).powf(l * k as f64);
            let den =
                tau0.powi((m - k - 1) as i32) * dagger.powi(k as i32) * (1.0 - k as f64 * dagger) * factorial(k + 1);
            num / den
        })
        .sum()
}

fn check_split(m: usize, tau0: f64) -> Result<()> {
    if m < 2 {
        return Err(Error::HypothesisViolated("a broadcast split needs M >= 2".into()));
    }
    if !(tau0 > 0.0 && tau0 < 1.0) {
        return Err(Error::HypothesisViolated(format!("τ0 = {tau0} not in (0, 1)")));
    }
    Ok(())
}

/// Feasible `τ0` interval with both `τ0` and `τ†` clear of the
/// self-decodable limit.
pub fn tau0_range(c_star: f64, m: usize) -> Result<(f64, f64)> {
    let floor = self_decodable_limit(c_star) + TAU_GUARDBAND;
    let lo = floor;
    let hi = 1.0 - (m as f64 - 1.0) * floor;
    if m < 2 || lo >= hi {
        return Err(Error::InfeasibleTauRange { c_star, m });
    }
    Ok((lo, hi))
}

/// ε-achievable symbol energy for the chosen mode. `tau0` is used by
/// [`EnergyMode::KappaHopping`] only.
pub fn achievable_energy(q: &EnergyQuery, mode: EnergyMode, tau0: Option<f64>) -> Result<f64> {
    q.validate()?;
    let dl = q.distance.powf(q.path_loss);
    let (c, eps, m) = (q.c_star, q.epsilon, q.m as f64);
    Ok(match mode {
        EnergyMode::Direct => c * dl / eps,
        EnergyMode::TransmitterClustering => {
            c * std::f64::consts::E * dl / (eps * (2.0 * std::f64::consts::PI * m).sqrt()).powf(1.0 / m)
        }
        EnergyMode::TransmitterClusteringExact => m * c * dl / (eps * factorial(q.m)).powf(1.0 / m),
        EnergyMode::Firf => c.exp_m1() * dl,
        EnergyMode::KappaHopping => {
            let kappa = q.kappa()?;
            let tau0 = tau0.ok_or_else(|| Error::HypothesisViolated("τ0 is required".into()))?;
            check_split(q.m, tau0)?;
            let (lo, hi) = tau0_range(c, q.m).map_err(|e| Error::HypothesisViolated(e.to_string()))?;
            if !(tau0 >= lo && tau0 <= hi) {
                return Err(Error::HypothesisViolated(format!(
                    "τ0 = {tau0} leaves a slot below the self-decodable limit at c* = {c}"
                )));
            }
            c * dl * (kappa_sum(q.m, q.path_loss, kappa, tau0) / eps).powf(1.0 / m)
        }
    })
}

/// Transmitter-clustering saving `U = (2πM)^{1/2M} / (e ε^{1−1/M})`.
pub fn energy_saving(q: &EnergyQuery) -> Result<f64> {
    q.validate()?;
    if q.m < 2 {
        return Err(Error::Domain("energy saving needs M >= 2".into()));
    }
    let m = q.m as f64;
    Ok((2.0 * std::f64::consts::PI * m).powf(0.5 / m) / (std::f64::consts::E * q.epsilon.powf(1.0 - 1.0 / m)))
}

/// Saving of the fully interleaved Rayleigh channel over direct
/// transmission, `c★ / ((e^{c★} − 1) ε)`; always below `1/ε`.
pub fn energy_saving_firf(c_star: f64, epsilon: f64) -> f64 {
    c_star / (c_star.exp_m1() * epsilon)
}

/// Cluster-hopping saving at normalized distance `κ` and broadcast share
/// `τ0`:
/// `U = {ε^{M−1} Σ_k C(M−1,k) κ^{L(M−k−1)}(1−κ)^{Lk} / [τ0^{M−k−1} τ†^k (1−kτ†)(k+1)!]}^{−1/M}`.
///
/// The formula is the small-threshold limit and contains neither `c★` nor
/// `D`; only the split itself is validated here.
pub fn energy_saving_kappa(q: &EnergyQuery, tau0: f64) -> Result<f64> {
    if !(q.epsilon > 0.0 && q.epsilon < 1.0) {
        return Err(Error::Domain(format!("target FER {} not in (0, 1)", q.epsilon)));
    }
    let kappa = q.kappa()?;
    check_split(q.m, tau0)?;
    let m = q.m as f64;
    Ok((q.epsilon.powf(m - 1.0) * kappa_sum(q.m, q.path_loss, kappa, tau0)).powf(-1.0 / m))
}

/// Broadcast share maximizing [`energy_saving_kappa`] over the feasible
/// range, by a 1000-point grid refined with golden-section search.
pub fn optimize_tau0(q: &EnergyQuery, kappa: f64) -> Result<(f64, f64)> {
    let q = q.with_kappa(kappa);
    q.kappa()?;
    let (lo, hi) = tau0_range(q.c_star, q.m)?;
    let u = |t: f64| energy_saving_kappa(&q, t).unwrap_or(f64::NEG_INFINITY);
    let grid: Vec<f64> = (0..=TAU_GRID).map(|i| lo + (hi - lo) * i as f64 / TAU_GRID as f64).collect();
    let best =
        (0..grid.len()).max_by(|&a, &b| u(grid[a]).total_cmp(&u(grid[b])).then(b.cmp(&a))).expect("grid is non-empty");
    let (mut a, mut b) = (grid[best.saturating_sub(1)], grid[(best + 1).min(TAU_GRID)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut x1, mut x2) = (b - phi * (b - a), a + phi * (b - a));
    let (mut f1, mut f2) = (u(x1), u(x2));
    for _ in 0..100 {
        if b - a < 1e-13 {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = u(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = u(x1);
        }
    }
    let candidates = [(grid[best], u(grid[best])), (x1, f1), (x2, f2)];
    let (t, v) = candidates.into_iter().fold((f64::NAN, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });
    Ok((t, v))
}
