//! Network geometry, link SNRs, reliable sets and the ACK-driven slot schedule.
//!
//! Node 0 is the sender, nodes `1..M-1` are cluster helpers and node `M` is
//! the destination. A frame is split into `M` slots with assignment rates
//! `τ_0..τ_{M-1}`. Helpers that decode from the broadcast slot form the
//! reliable set `F` and take over their own slots; every other slot stays with
//! the sender.
//!
//! Decoding failures of threshold-reliable helpers are neglected, and
//! decoding latency is taken as zero.

use crate::error::{Error, Result};

/// Largest `M` for which the `2^{M-1}` reliable sets are enumerated.
pub const MAX_SLOTS: usize = 20;

/// Tolerance on `Σ τ_j = 1`.
pub const TAU_SUM_TOL: f64 = 1e-12;

/// Distances, path-loss exponent and symbol energy of one cluster.
///
/// Only the links the protocol uses are kept: sender to each helper and every
/// transmitting node to the destination.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    sender_to_helper: Vec<f64>,
    to_destination: Vec<f64>,
    path_loss: f64,
    symbol_energy: f64,
}

/// Average link SNRs `E · d^{-L}`, linear.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkSnrs {
    /// `SNR_{0,j}` for helpers `j = 1..M-1` (index `j - 1`).
    pub sender_to_helper: Vec<f64>,
    /// `SNR_{i,M}` for nodes `i = 0..M-1`.
    pub to_destination: Vec<f64>,
}

/// The `(r, d, D)` summary of a cluster: farthest helper from the sender,
/// farthest helper from the destination, and the direct distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopProfile {
    pub r: f64,
    pub d: f64,
    pub big_d: f64,
}

fn check_distance(what: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidGeometry(format!("{what} = {x} must be positive and finite")))
    }
}

impl Geometry {
    /// From a distance matrix with rows `i = 0..M-1` and columns `j = 1..M`
    /// (`distances[i][j-1] = d_{i,j}`). Helper-to-helper entries are not used
    /// by the protocol and are not checked.
    pub fn from_matrix(distances: &[Vec<f64>], path_loss: f64, symbol_energy: f64) -> Result<Self> {
        let m = distances.len();
        if m == 0 {
            return Err(Error::InvalidGeometry("empty distance matrix".into()));
        }
        if let Some((i, row)) = distances.iter().enumerate().find(|(_, row)| row.len() != m) {
            return Err(Error::InvalidGeometry(format!("row {i} has {} columns, expected {m}", row.len())));
        }
        let sender_to_helper = distances[0][..m - 1]
            .iter()
            .enumerate()
            .map(|(j, &x)| check_distance(&format!("d[0][{}]", j + 1), x))
            .collect::<Result<Vec<_>>>()?;
        let to_destination = distances
            .iter()
            .enumerate()
            .map(|(i, row)| check_distance(&format!("d[{i}][{m}]"), row[m - 1]))
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(sender_to_helper, to_destination, path_loss, symbol_energy)
    }

    /// Symmetric cluster: every helper at `r` from the sender and `d` from the
    /// destination, sender at `D` from the destination.
    pub fn from_profile(m: usize, r: f64, d: f64, big_d: f64, path_loss: f64, symbol_energy: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidGeometry("M must be >= 1".into()));
        }
        let r = check_distance("r", r)?;
        let d = check_distance("d", d)?;
        let big_d = check_distance("D", big_d)?;
        let mut to_destination = vec![d; m];
        to_destination[0] = big_d;
        Self::assemble(vec![r; m - 1], to_destination, path_loss, symbol_energy)
    }

    /// Symmetric cluster given directly by its average SNRs: `ρ` sender to
    /// helper, `λ` helper to destination, `η` sender to destination.
    ///
    /// Represented with `E = 1` and `L = 1`, so distances are inverse SNRs.
    pub fn from_snrs(m: usize, rho: f64, lambda: f64, eta: f64) -> Result<Self> {
        Self::from_profile(m, 1.0 / rho, 1.0 / lambda, 1.0 / eta, 1.0, 1.0)
    }

    fn assemble(
        sender_to_helper: Vec<f64>,
        to_destination: Vec<f64>,
        path_loss: f64,
        symbol_energy: f64,
    ) -> Result<Self> {
        if !(path_loss > 0.0 && path_loss.is_finite()) {
            return Err(Error::InvalidGeometry(format!("path loss {path_loss} must be positive")));
        }
        if !(symbol_energy > 0.0 && symbol_energy.is_finite()) {
            return Err(Error::InvalidGeometry(format!("symbol energy {symbol_energy} must be positive")));
        }
        Ok(Self { sender_to_helper, to_destination, path_loss, symbol_energy })
    }

    pub fn m(&self) -> usize {
        self.to_destination.len()
    }

    pub fn path_loss(&self) -> f64 {
        self.path_loss
    }

    pub fn symbol_energy(&self) -> f64 {
        self.symbol_energy
    }

    pub fn sender_to_helper(&self) -> &[f64] {
        &self.sender_to_helper
    }

    pub fn to_destination(&self) -> &[f64] {
        &self.to_destination
    }

    /// Same cluster with a different symbol energy.
    pub fn with_symbol_energy(&self, symbol_energy: f64) -> Result<Self> {
        Self::assemble(self.sender_to_helper.clone(), self.to_destination.clone(), self.path_loss, symbol_energy)
    }

    pub fn hop_profile(&self) -> HopProfile {
        let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        HopProfile { r: max(&self.sender_to_helper), d: max(&self.to_destination[1..]), big_d: self.to_destination[0] }
    }

    /// Helpers violating `|D − d_{0,j}| ≤ d_{j,M} ≤ D + d_{0,j}`. These are
    /// reported, not rejected.
    pub fn triangle_warnings(&self) -> Vec<String> {
        let big_d = self.to_destination[0];
        (1..self.m())
            .filter_map(|j| {
                let a = self.sender_to_helper[j - 1];
                let b = self.to_destination[j];
                let ok = (big_d - a).abs() <= b * (1.0 + 1e-12) && b <= (big_d + a) * (1.0 + 1e-12);
                (!ok).then(|| {
                    format!("helper {j}: d[0][{j}] = {a}, d[{j}][M] = {b}, D = {big_d} break the triangle inequality")
                })
            })
            .collect()
    }
}

/// Average link SNRs `SNR_{i,j} = E · d_{i,j}^{-L}`.
pub fn link_snrs(geom: &Geometry) -> LinkSnrs {
    let snr = |d: f64| geom.symbol_energy * d.powf(-geom.path_loss);
    LinkSnrs {
        sender_to_helper: geom.sender_to_helper.iter().map(|&d| snr(d)).collect(),
        to_destination: geom.to_destination.iter().map(|&d| snr(d)).collect(),
    }
}

/// Slot count and assignment rates.
#[derive(Debug, Clone, PartialEq)]
pub struct CoopConfig {
    taus: Vec<f64>,
}

impl CoopConfig {
    pub fn new(taus: Vec<f64>) -> Result<Self> {
        if taus.is_empty() {
            return Err(Error::InvalidConfig("at least one slot is required".into()));
        }
        if let Some(t) = taus.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
            return Err(Error::InvalidConfig(format!("assignment rate {t} not in (0, 1]")));
        }
        let sum: f64 = taus.iter().sum();
        if (sum - 1.0).abs() > TAU_SUM_TOL {
            return Err(Error::InvalidConfig(format!("assignment rates sum to {sum}, not 1")));
        }
        Ok(Self { taus })
    }

    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidConfig("at least one slot is required".into()));
        }
        Self::new(vec![1.0 / m as f64; m])
    }

    /// Broadcast slot `τ0`, the rest split evenly as `τ† = (1 − τ0)/(M − 1)`.
    pub fn with_broadcast(m: usize, tau0: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidConfig("a broadcast split needs M >= 2".into()));
        }
        let dagger = (1.0 - tau0) / (m - 1) as f64;
        let mut taus = vec![dagger; m];
        taus[0] = tau0;
        Self::new(taus)
    }

    pub fn m(&self) -> usize {
        self.taus.len()
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn tau0(&self) -> f64 {
        self.taus[0]
    }

    /// Every slot on its own satisfies `τ_j > 1 − e^{−c★}`.
    pub fn all_self_decodable(&self, c_star: f64) -> bool {
        self.taus.iter().all(|&t| crate::puncturing::is_self_decodable(c_star, t))
    }

    /// Weight of the sender's channel to the destination: `1 − Σ_{i∈F} τ_i`.
    pub fn sender_share(&self, f: ReliableSet) -> f64 {
        self.taus[0] + (1..self.m()).filter(|&j| !f.contains(j)).map(|j| self.taus[j]).sum::<f64>()
    }
}

/// Helpers that decoded after the broadcast slot, as a bit mask (bit `j-1`
/// for helper `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ReliableSet(u32);

impl ReliableSet {
    pub const EMPTY: ReliableSet = ReliableSet(0);

    pub fn from_members(members: &[usize], m: usize) -> Result<Self> {
        let mut mask = 0u32;
        for &j in members {
            if j == 0 || j >= m || j > MAX_SLOTS {
                return Err(Error::InvalidMember { member: j, m });
            }
            mask |= 1 << (j - 1);
        }
        Ok(Self(mask))
    }

    pub fn from_mask(mask: u32) -> Self {
        Self(mask)
    }

    pub fn full(m: usize) -> Self {
        Self(((1u64 << (m.max(1) - 1)) - 1) as u32)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn contains(self, j: usize) -> bool {
        (1..=32).contains(&j) && self.0 >> (j - 1) & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn members(self) -> impl Iterator<Item = usize> {
        (1..=32).filter(move |&j| self.contains(j))
    }

    /// All `2^{M-1}` reliable sets of an `M`-slot cluster, in mask order.
    pub fn all(m: usize) -> Result<impl Iterator<Item = ReliableSet>> {
        check_slots(m)?;
        Ok((0..1u32 << (m - 1)).map(ReliableSet))
    }

    fn fits(self, m: usize) -> bool {
        (self.0 as u64) >> (m.max(1) - 1) == 0
    }
}

impl std::fmt::Display for ReliableSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let members: Vec<String> = self.members().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", members.join(","))
    }
}

pub(crate) fn check_slots(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidConfig("M must be >= 1".into()));
    }
    if m > MAX_SLOTS {
        return Err(Error::TooManyHelpers { m, cap: MAX_SLOTS });
    }
    Ok(())
}

/// Transmitting node per slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    pub slot_tx: Vec<usize>,
}

/// Slot `j` goes to helper `j` if it is reliable, otherwise to the sender.
pub fn schedule(f: ReliableSet, m: usize) -> Result<Schedule> {
    check_slots(m)?;
    if !f.fits(m) {
        let member = f.members().find(|&j| j >= m).unwrap_or(m);
        return Err(Error::InvalidMember { member, m });
    }
    Ok(Schedule { slot_tx: (0..m).map(|j| if f.contains(j) { j } else { 0 }).collect() })
}

/// Probability that helper `j` decodes from the broadcast slot,
/// `e^{−χ0 / SNR_{0,j}}`, and its complement.
fn helper_reliability(chi0: f64, snr: f64) -> (f64, f64) {
    let x = -chi0 / snr;
    (x.exp(), -x.exp_m1())
}

/// Probability of each reliable set,
/// `P(F) = Π_{j∈F} e^{−χ0/SNR_{0,j}} Π_{j∉F} (1 − e^{−χ0/SNR_{0,j}})`.
pub fn reliable_set_prob(cfg: &CoopConfig, snrs: &[f64], chi0: f64) -> Result<Vec<(ReliableSet, f64)>> {
    let m = cfg.m();
    check_slots(m)?;
    if snrs.len() != m - 1 {
        return Err(Error::InvalidConfig(format!("{} sender-to-helper SNRs for M = {m}", snrs.len())));
    }
    if !(chi0 >= 0.0) {
        return Err(Error::Domain(format!("threshold {chi0} must be >= 0")));
    }
    let rel: Vec<(f64, f64)> = snrs.iter().map(|&s| helper_reliability(chi0, s)).collect();
    Ok(ReliableSet::all(m)?
        .map(|f| {
            let p = rel.iter().enumerate().map(|(k, &(on, off))| if f.contains(k + 1) { on } else { off }).product();
            (f, p)
        })
        .collect())
}

/// Slot-averaged Bhattacharyya parameter at the destination for fading
/// powers `ν_i` (node `i` to destination) and reliable set `F`:
/// `γ̄ = (1 − Σ_F τ_i) e^{−ν_0 SNR_{0,M}} + Σ_F τ_i e^{−ν_i SNR_{i,M}}`.
pub fn avg_bhattacharyya(nu: &[f64], f: ReliableSet, cfg: &CoopConfig, snrs: &[f64]) -> f64 {
    let taus = cfg.taus();
    let mut sender = taus[0];
    let mut relayed = 0.0;
    for j in 1..taus.len() {
        if f.contains(j) {
            relayed += taus[j] * (-nu[j] * snrs[j]).exp();
        } else {
            sender += taus[j];
        }
    }
    sender * (-nu[0] * snrs[0]).exp() + relayed
}
