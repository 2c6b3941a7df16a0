//! Resolved settings of a whole run. Stage seeds are derived from the single
//! run seed, and the shape fields of the autoencoder are copied from the
//! run-level `max_sent`/`embed_dim`, so the stored config is self-contained.

use serde::{Deserialize, Serialize};

use crate::autoencoder::AeConfig;
use crate::baselines::BaselineConfig;
use crate::classifier::LogregConfig;
use crate::corpus::SplitFractions;
use crate::error::Result;
use crate::rng::sub_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    pub max_sent: usize,
    pub embed_dim: usize,
    /// Outliers to inject when building a corpus.
    pub n_inject: usize,
    pub split: SplitFractions,
    pub autoencoder: AeConfig,
    pub classifier: LogregConfig,
    pub baseline: BaselineConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        let autoencoder = AeConfig::default();
        RunConfig {
            seed: 0,
            max_sent: autoencoder.max_sent,
            embed_dim: autoencoder.embed_dim,
            n_inject: 1000,
            split: SplitFractions::default(),
            autoencoder,
            classifier: LogregConfig::default(),
            baseline: BaselineConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn stage_seed(&self, stage: &str) -> u64 {
        sub_seed(self.seed, stage)
    }

    /// Copies run-level shape and seed values into the stage configs.
    pub fn resolve(mut self) -> Result<Self> {
        self.autoencoder.max_sent = self.max_sent;
        self.autoencoder.embed_dim = self.embed_dim;
        self.autoencoder.seed = self.stage_seed("autoencoder");
        self.classifier.seed = self.stage_seed("classifier");
        self.split.validate()?;
        self.autoencoder.validate()?;
        Ok(self)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }
}
