use std::path::Path;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use crate::datasets::{generate, Dataset, GRID25, SWISS_ROLL};
use crate::gan::GanConfig;
use crate::mmc::AutoencoderConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataConfig {
    /// `grid25` or `swiss_roll`.
    pub generator: String,
    pub n: usize,
    /// Swiss-roll noise std (before scaling).
    pub noise: f64,
    /// Swiss-roll output scale.
    pub scale: f64,
    pub seed: u64,
}

impl Default for DataConfig {
    fn default() -> Self {
        Self {
            generator: GRID25.into(),
            n: 200,
            noise: 0.25,
            scale: 2.0 / 15.0,
            seed: 0,
        }
    }
}

impl DataConfig {
    pub fn generate(&self) -> anyhow::Result<Dataset> {
        Ok(generate(&self.generator, self.n, self.noise, self.scale, self.seed)?)
    }

    /// Phase-switch threshold used when the config leaves `gan.threshold` unset.
    pub fn default_threshold(&self) -> f64 {
        match self.generator.as_str() {
            SWISS_ROLL => 0.1,
            _ => 0.01,
        }
    }
}

/// Everything a pipeline run needs. Every section and field is optional in
/// the TOML file; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: DataConfig,
    pub autoencoder: AutoencoderConfig,
    pub gan: GanConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let table: toml::Table = toml::from_str(text).context("config is not valid TOML")?;
        let threshold_set = table
            .get("gan")
            .and_then(|g| g.as_table())
            .is_some_and(|g| g.contains_key("threshold"));
        let mut cfg: RunConfig = table.try_into().context("invalid config")?;
        if !threshold_set {
            cfg.gan.threshold = cfg.data.default_threshold();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("cannot read config {}", p.display()))?;
                Self::parse(&text).with_context(|| format!("in {}", p.display()))
            }
            None => Self::parse(""),
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if ![GRID25, SWISS_ROLL].contains(&self.data.generator.as_str()) {
            bail!(
                "unknown data generator {:?} (expected {GRID25:?} or {SWISS_ROLL:?})",
                self.data.generator
            );
        }
        if self.autoencoder.m != self.gan.m {
            bail!(
                "autoencoder.m = {} and gan.m = {} must agree",
                self.autoencoder.m,
                self.gan.m
            );
        }
        self.gan.validate()?;
        Ok(())
    }

    /// Applies a run seed to every model-side stream. The dataset seed is
    /// left alone so repeats share the same data.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.autoencoder.seed = seed;
        self.gan.seed = seed;
        self
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}
