use crate::checkpoint::Checkpoint;
use crate::error::{Error, Result};
use crate::nn::Tensor;
use crate::scalar::Scalar;

use super::{AeConfig, AutoencoderModel};

impl<T: Scalar> AutoencoderModel<T> {
    /// Adds config, training log and every parameter under `prefix`.
    pub fn save_into(&self, ckpt: &mut Checkpoint, prefix: &str) {
        ckpt.set_meta(&format!("{prefix}.config"), &self.config);
        ckpt.set_meta(&format!("{prefix}.training_log"), &self.training_log);
        for (name, p) in self.named_params() {
            ckpt.push_block(format!("{prefix}.{name}"), p.shape(), p.to_f64_vec());
        }
    }

    /// Rebuilds the layer stack from the stored config, then overwrites every
    /// parameter; missing or mis-shaped blocks are format errors.
    pub fn load_from(ckpt: &Checkpoint, prefix: &str) -> Result<Self> {
        let config: AeConfig = ckpt.meta(&format!("{prefix}.config"))?;
        let training_log: Vec<f64> = ckpt.meta(&format!("{prefix}.training_log"))?;
        let mut model = AutoencoderModel::new(config).map_err(|e| Error::Format(format!("stored config: {e}")))?;
        model.training_log = training_log;
        let mut expected = 0;
        for (name, p) in model.named_params_mut() {
            let key = format!("{prefix}.{name}");
            let values = ckpt.block_with_shape(&key, p.shape())?;
            *p = Tensor::from_f64(p.shape().to_vec(), values)?;
            expected += 1;
        }
        let stored = ckpt.blocks().iter().filter(|b| b.name.starts_with(&format!("{prefix}."))).count();
        if stored != expected {
            return Err(Error::Format(format!(
                "checkpoint holds {stored} {prefix} blocks, model has {expected} parameters"
            )));
        }
        Ok(model)
    }

    pub fn to_checkpoint_text(&self) -> String {
        let mut c = Checkpoint::new();
        self.save_into(&mut c, "autoencoder");
        c.to_text()
    }

    pub fn from_checkpoint_text(text: &str) -> Result<Self> {
        Self::load_from(&Checkpoint::parse(text)?, "autoencoder")
    }
}
