//! Scenario files: geometry, cooperation config, code threshold and the
//! optional simulation, bound and energy settings.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "geometry": {"mode": "snr", "rho_db": 0.0, "lambda_db": 6.0},
//!   "coop": {"m": 5},
//!   "code": {"c_star": 0.17},
//!   "simulation": {"seed": 7, "n_frames": 100000},
//!   "bound": {"n_samples": 100000, "seed": 1},
//!   "energy": {"epsilon": 0.01, "tau0": 0.3}
//! }
//! ```
//!
//! Geometry modes:
//! - `matrix`: `distances[i][j-1] = d_{i,j}` for `i = 0..M-1`, `j = 1..M`,
//!   plus `path_loss` and `symbol_energy`.
//! - `profile`: symmetric cluster `r`, `d`, `D`, plus `path_loss` and
//!   `symbol_energy`.
//! - `snr`: symmetric cluster by average SNRs in dB; `eta_db` defaults to
//!   `lambda_db` and then follows it in λ sweeps.
//!
//! `coop.taus` defaults to the uniform split. Unknown fields are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{CoopConfig, Geometry};
use crate::{from_db, to_db};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    pub geometry: GeometrySpec,
    pub coop: CoopSpec,
    pub code: CodeSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulation: Option<SimulationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum GeometrySpec {
    Matrix {
        distances: Vec<Vec<f64>>,
        path_loss: f64,
        symbol_energy: f64,
    },
    Profile {
        r: f64,
        d: f64,
        #[serde(rename = "D")]
        big_d: f64,
        path_loss: f64,
        symbol_energy: f64,
    },
    Snr {
        rho_db: f64,
        lambda_db: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta_db: Option<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoopSpec {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taus: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub c_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSpec {
    pub seed: u64,
    pub n_frames: u64,
    #[serde(default)]
    pub antithetic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundSpec {
    #[serde(default = "default_bound_samples")]
    pub n_samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub antithetic: bool,
}

fn default_bound_samples() -> u64 {
    100_000
}

impl Default for BoundSpec {
    fn default() -> Self {
        Self { n_samples: default_bound_samples(), seed: 0, antithetic: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySpec {
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau0: Option<f64>,
}

/// A validated cluster: geometry, assignment rates and code threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub geometry: Geometry,
    pub coop: CoopConfig,
    pub c_star: f64,
}

impl Scenario {
    pub fn new(geometry: Geometry, coop: CoopConfig, c_star: f64) -> Result<Self> {
        if geometry.m() != coop.m() {
            return Err(Error::InvalidConfig(format!("geometry has {} slots, config has {}", geometry.m(), coop.m())));
        }
        if !(c_star > 0.0 && c_star.is_finite()) {
            return Err(Error::InvalidConfig(format!("threshold {c_star} must be positive")));
        }
        Ok(Self { geometry, coop, c_star })
    }

    /// Symmetric cluster given by average SNRs (linear).
    pub fn symmetric(m: usize, rho: f64, lambda: f64, eta: f64, c_star: f64) -> Result<Self> {
        Self::new(Geometry::from_snrs(m, rho, lambda, eta)?, CoopConfig::uniform(m)?, c_star)
    }

    pub fn m(&self) -> usize {
        self.coop.m()
    }
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text)?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(Error::Malformed(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                file.schema_version
            )));
        }
        file.scenario()?;
        Ok(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let m = self.coop.m;
        let geometry = match &self.geometry {
            GeometrySpec::Matrix { distances, path_loss, symbol_energy } => {
                let g = Geometry::from_matrix(distances, *path_loss, *symbol_energy)?;
                if g.m() != m {
                    return Err(Error::InvalidConfig(format!("distance matrix is for M = {}, coop.m = {m}", g.m())));
                }
                g
            }
            GeometrySpec::Profile { r, d, big_d, path_loss, symbol_energy } => {
                Geometry::from_profile(m, *r, *d, *big_d, *path_loss, *symbol_energy)?
            }
            GeometrySpec::Snr { rho_db, lambda_db, eta_db } => {
                Geometry::from_snrs(m, from_db(*rho_db), from_db(*lambda_db), from_db(eta_db.unwrap_or(*lambda_db)))?
            }
        };
        let coop = match &self.coop.taus {
            Some(t) if t.len() != m => {
                return Err(Error::InvalidConfig(format!("{} assignment rates for M = {m}", t.len())))
            }
            Some(t) => CoopConfig::new(t.clone())?,
            None => CoopConfig::uniform(m)?,
        };
        Scenario::new(geometry, coop, self.code.c_star)
    }

    /// Sets `λ` (and `η` when it follows `λ`). Only `snr` geometries.
    pub fn set_lambda_db(&mut self, value: f64) -> Result<()> {
        match &mut self.geometry {
            GeometrySpec::Snr { lambda_db, .. } => {
                *lambda_db = value;
                Ok(())
            }
            _ => Err(Error::InvalidConfig("λ sweeps need an `snr` geometry".into())),
        }
    }

    /// Sets `ρ`. Only `snr` geometries.
    pub fn set_rho_db(&mut self, value: f64) -> Result<()> {
        match &mut self.geometry {
            GeometrySpec::Snr { rho_db, .. } => {
                *rho_db = value;
                Ok(())
            }
            _ => Err(Error::InvalidConfig("ρ sweeps need an `snr` geometry".into())),
        }
    }

    /// Sets the symbol energy to `value` dB. In `snr` geometries the file
    /// SNRs are taken at unit energy and all move by `value` dB.
    pub fn set_energy_db(&mut self, value: f64) -> Result<()> {
        match &mut self.geometry {
            GeometrySpec::Matrix { symbol_energy, .. } | GeometrySpec::Profile { symbol_energy, .. } => {
                *symbol_energy = from_db(value);
            }
            GeometrySpec::Snr { rho_db, lambda_db, eta_db } => {
                let eta = eta_db.unwrap_or(*lambda_db);
                *rho_db += value;
                *lambda_db += value;
                *eta_db = Some(eta + value);
            }
        }
        Ok(())
    }

    /// Changes the slot count, resetting to the uniform split.
    pub fn set_m(&mut self, m: usize) -> Result<()> {
        if matches!(self.geometry, GeometrySpec::Matrix { .. }) {
            return Err(Error::InvalidConfig("M sweeps need a `profile` or `snr` geometry".into()));
        }
        self.coop = CoopSpec { m, taus: None };
        Ok(())
    }

    /// Path-loss exponent of distance-based geometries.
    pub fn path_loss(&self) -> Option<f64> {
        match &self.geometry {
            GeometrySpec::Matrix { path_loss, .. } | GeometrySpec::Profile { path_loss, .. } => Some(*path_loss),
            GeometrySpec::Snr { .. } => None,
        }
    }

    /// Hop profile normalized by `D`, `κ = r / D`.
    pub fn kappa(&self) -> Option<f64> {
        match &self.geometry {
            GeometrySpec::Profile { r, big_d, .. } => Some(r / big_d),
            _ => None,
        }
    }
}

/// Average SNRs of a symmetric scenario in dB: `(ρ, λ, η)`.
pub fn snrs_db(s: &Scenario) -> (f64, f64, f64) {
    let snrs = crate::protocol::link_snrs(&s.geometry);
    let rho = snrs.sender_to_helper.first().copied().unwrap_or(f64::NAN);
    let lambda = snrs.to_destination.get(1).copied().unwrap_or(f64::NAN);
    (to_db(rho), to_db(lambda), to_db(snrs.to_destination[0]))
}
