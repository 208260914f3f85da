//! Config files for the module commands. Every field may also be given as a
//! flag; flags take precedence.

use std::path::Path;

use anyhow::{Context, Result};
use pfol_core::birational::TowerStep;
use pfol_core::quotient::RamificationCase;
use serde::de::DeserializeOwned;
use serde::Deserialize;

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("config schema violation in {}", path.display()))
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverConfig {
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub degree: Option<u32>,
    pub section: Option<String>,
    pub variables: Option<Vec<String>>,
    pub cover_variable: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscrepancyConfig {
    pub p: Option<u64>,
    pub variables: Option<Vec<String>>,
    pub steps: Option<Vec<TowerStep>>,
    pub foliation: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientConfig {
    pub p: Option<u64>,
    pub variables: Option<Vec<String>>,
    pub derivation: Option<String>,
    pub hypersurface: Option<String>,
    pub bound: Option<u32>,
    pub ramification: Option<RamificationCase>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellConfig {
    pub d: Vec<i64>,
    pub kf: Vec<i64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KfSeriesConfig {
    pub l_square: i64,
    pub p: u64,
    pub m_max: i64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeConfig {
    pub matrix: Option<Vec<Vec<i64>>>,
    pub witnesses: Option<usize>,
    pub height: Option<i64>,
    pub shell: Option<ShellConfig>,
    pub kf_series: Option<KfSeriesConfig>,
}
