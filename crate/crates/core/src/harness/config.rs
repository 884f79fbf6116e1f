//! TOML experiment configuration.
//!
//! ```toml
//! [grid]
//! dim = 1
//! n_per_dim = 256
//! length = 6.283185307179586
//!
//! [constants]
//! gamma = 1.4
//! bigA = 1.0
//! p_bar = 1.0
//! s_bar = 0.0
//!
//! [scenario]
//! name = "ill"
//! preparation = "ill"
//! xi0 = [{ k = [1], amplitude = 0.05 }]
//! phi0 = [{ k = [1], amplitude = 0.02, phase = 1.5707963267948966 }]
//! offset = [{ k = [1], amplitude = 0.05, axis = 0 }]
//!
//! [sweep]
//! tau_list = [0.25, 0.125, 0.0625, 0.03125]
//! t_end = 0.5
//! sample_dt = 0.00390625
//! ```
//!
//! A mode `{ k, amplitude, phase }` stands for `amplitude * sin(2 pi k.x / length + phase)`.
//! Unknown keys are rejected.

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    #[serde(default)]
    pub constants: ConstantsConfig,
    pub scenario: ScenarioConfig,
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub n_per_dim: usize,
    #[serde(default = "default_length")]
    pub length: f64,
}

fn default_length() -> f64 {
    TAU
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsConfig {
    pub gamma: f64,
    #[serde(rename = "bigA")]
    pub big_a: f64,
    pub p_bar: f64,
    pub s_bar: f64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            gamma: 1.4,
            big_a: 1.0,
            p_bar: 1.0,
            s_bar: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreparationKind {
    Well,
    Ill,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub k: Vec<i64>,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

/// A velocity offset mode along one axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetMode {
    pub k: Vec<i64>,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
    pub axis: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub preparation: PreparationKind,
    #[serde(default)]
    pub xi0: Vec<Mode>,
    #[serde(default)]
    pub phi0: Vec<Mode>,
    #[serde(default)]
    pub offset: Vec<OffsetMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub tau_list: Vec<f64>,
    pub t_end: f64,
    pub sample_dt: f64,
    #[serde(default = "default_cfl")]
    pub cfl_acoustic: f64,
    #[serde(default = "default_cfl")]
    pub cfl_advective: f64,
    /// Relaxing step is at most this fraction of `tau^2`.
    #[serde(default = "default_tau2_fraction")]
    pub tau2_fraction: f64,
    #[serde(default = "default_relaxed_dt")]
    pub relaxed_dt: f64,
}

fn default_cfl() -> f64 {
    0.5
}

fn default_tau2_fraction() -> f64 {
    0.02
}

fn default_relaxed_dt() -> f64 {
    2.5e-4
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Serialization with every default filled in; the hash input.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    /// Hex SHA-256 of [`Config::canonical`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    /// The acceptance scenario: d = 1, n = 256, `xi0 = 0.05 sin x`,
    /// `phi0 = 0.02 cos x`, offset `0.05 sin x` along axis 0.
    pub fn default_ill_prepared() -> Self {
        Config {
            grid: GridConfig {
                dim: 1,
                n_per_dim: 256,
                length: TAU,
            },
            constants: ConstantsConfig::default(),
            scenario: ScenarioConfig {
                name: "default-ill".into(),
                preparation: PreparationKind::Ill,
                xi0: vec![Mode {
                    k: vec![1],
                    amplitude: 0.05,
                    phase: 0.0,
                }],
                phi0: vec![Mode {
                    k: vec![1],
                    amplitude: 0.02,
                    phase: FRAC_PI_2,
                }],
                offset: vec![OffsetMode {
                    k: vec![1],
                    amplitude: 0.05,
                    phase: 0.0,
                    axis: 0,
                }],
            },
            sweep: SweepConfig {
                tau_list: vec![0.25, 0.125, 0.0625, 0.03125],
                t_end: 0.5,
                sample_dt: 1.0 / 256.0,
                cfl_acoustic: default_cfl(),
                cfl_advective: default_cfl(),
                tau2_fraction: default_tau2_fraction(),
                relaxed_dt: default_relaxed_dt(),
            },
        }
    }

    /// Same data with the velocity placed on the relaxed manifold.
    pub fn default_well_prepared() -> Self {
        let mut c = Self::default_ill_prepared();
        c.scenario.name = "default-well".into();
        c.scenario.preparation = PreparationKind::Well;
        c.scenario.offset.clear();
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[grid]
dim = 1
n_per_dim = 64

[scenario]
name = "t"
preparation = "well"
xi0 = [{ k = [1], amplitude = 0.01 }]

[sweep]
tau_list = [0.5]
t_end = 0.1
sample_dt = 0.05
"#;

    #[test]
    fn parses_with_defaults() {
        let c = Config::parse(SAMPLE).unwrap();
        assert_eq!(c.grid.length, TAU);
        assert_eq!(c.constants, ConstantsConfig::default());
        assert_eq!(c.scenario.preparation, PreparationKind::Well);
        assert_eq!(c.scenario.xi0[0].phase, 0.0);
        assert!(c.scenario.phi0.is_empty());
        assert_eq!(c.sweep.cfl_acoustic, 0.5);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = SAMPLE.replace("dim = 1", "dim = 1\nspacing = 2");
        assert!(matches!(Config::parse(&bad), Err(Error::Config(_))));
        let bad = SAMPLE.replace("[sweep]", "[sweeps]");
        assert!(Config::parse(&bad).is_err());
    }

    #[test]
    fn canonical_round_trip_and_hash() {
        let c = Config::default_ill_prepared();
        let back = Config::parse(&c.canonical()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_eq!(c.hash().len(), 64);
        assert_ne!(c.hash(), Config::default_well_prepared().hash());
    }

    #[test]
    fn hash_ignores_formatting() {
        let a = Config::parse(SAMPLE).unwrap();
        let b = Config::parse(&SAMPLE.replace("n_per_dim = 64", "n_per_dim   =   64 # comment")).unwrap();
        assert_eq!(a.hash(), b.hash());
    }
}
