use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::ccm::Connectivity;
use crate::stratification::{Priors, Thresholds};

/// Environment variable consulted for the seed when neither the command
/// line nor the config sets one.
pub const SEED_ENV: &str = "LANDCORE_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrataSection {
    pub high_frac: f64,
    pub medium_frac: f64,
    pub block_size: f64,
    pub priors: Priors,
    pub total_samples: usize,
}

impl Default for StrataSection {
    fn default() -> Self {
        let t = Thresholds::default();
        StrataSection {
            high_frac: t.high,
            medium_frac: t.medium,
            block_size: 100.0,
            priors: Priors::default(),
            total_samples: 100,
        }
    }
}

impl StrataSection {
    pub fn thresholds(&self) -> Thresholds {
        Thresholds { high: self.high_frac, medium: self.medium_frac }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CcmSection {
    pub connectivity: u32,
    pub cell_size: f64,
    pub steiner: usize,
    pub default_weight: f64,
}

impl Default for CcmSection {
    fn default() -> Self {
        CcmSection { connectivity: 8, cell_size: 10.0, steiner: 4, default_weight: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemandSection {
    pub population: f64,
    /// Tonnes per person per year.
    pub per_capita_demand: f64,
    /// Tonnes per square meter per year.
    pub yield_per_m2: f64,
    /// Year the estimate refers to.
    pub year: i32,
}

impl Default for DemandSection {
    fn default() -> Self {
        DemandSection { population: 0.0, per_capita_demand: 0.0, yield_per_m2: 0.0, year: 2000 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub strata: StrataSection,
    pub ccm: CcmSection,
    pub demand: DemandSection,
}

fn bad(key: &str, reason: impl Into<String>) -> IoError {
    IoError::Config { key: key.into(), reason: reason.into() }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, IoError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
        RunConfig::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, IoError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|s| {
                    let before = &text[..s.start.min(text.len())];
                    let line = before.matches('\n').count() + 1;
                    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
                    (line, column)
                })
                .unwrap_or((0, 0));
            IoError::Parse { line, column, message: e.message().to_string() }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), IoError> {
        let s = &self.strata;
        s.thresholds().validate().map_err(|e| bad("strata.high_frac/medium_frac", e.to_string()))?;
        s.priors.validate().map_err(|e| bad("strata.priors", e.to_string()))?;
        if !(s.block_size > 0.0 && s.block_size.is_finite()) {
            return Err(bad("strata.block_size", "must be positive"));
        }
        if s.total_samples == 0 {
            return Err(bad("strata.total_samples", "must be at least 1"));
        }
        let c = &self.ccm;
        Connectivity::from_count(c.connectivity).map_err(|e| bad("ccm.connectivity", e.to_string()))?;
        if !(c.cell_size > 0.0 && c.cell_size.is_finite()) {
            return Err(bad("ccm.cell_size", "must be positive"));
        }
        if c.steiner == 0 {
            return Err(bad("ccm.steiner", "must be at least 1"));
        }
        if c.default_weight.is_nan() || c.default_weight <= 0.0 {
            return Err(bad("ccm.default_weight", "must be positive or inf"));
        }
        let d = &self.demand;
        for (key, v) in [
            ("demand.population", d.population),
            ("demand.per_capita_demand", d.per_capita_demand),
            ("demand.yield_per_m2", d.yield_per_m2),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(bad(key, "must be a nonnegative number"));
            }
        }
        Ok(())
    }
}

/// Seed precedence: command line, then config, then the environment value,
/// then 0.
pub fn resolve_seed(cli: Option<u64>, config: Option<u64>, env: Option<&str>) -> Result<u64, IoError> {
    if let Some(s) = cli.or(config) {
        return Ok(s);
    }
    match env {
        Some(v) => v.trim().parse().map_err(|_| bad(SEED_ENV, format!("{v:?} is not an unsigned integer"))),
        None => Ok(0),
    }
}
