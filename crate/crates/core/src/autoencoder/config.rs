use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{conv_output_dim, AdamConfig};

/// One encoder convolution. The decoder mirrors it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvSpec {
    pub out_channels: usize,
    pub kernel: usize,
    pub stride: usize,
    pub padding: usize,
}

impl ConvSpec {
    pub const fn new(out_channels: usize, kernel: usize, stride: usize, padding: usize) -> Self {
        ConvSpec { out_channels, kernel, stride, padding }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AeConfig {
    pub max_sent: usize,
    pub embed_dim: usize,
    pub latent_dim: usize,
    pub channels: Vec<ConvSpec>,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub optimizer: AdamConfig,
    /// Restrict the reconstruction loss to non-padding rows.
    pub masked_loss: bool,
}

impl Default for AeConfig {
    fn default() -> Self {
        AeConfig {
            max_sent: 32,
            embed_dim: 768,
            latent_dim: 32,
            channels: vec![ConvSpec::new(8, 3, 2, 1), ConvSpec::new(16, 3, 2, 1), ConvSpec::new(32, 3, 2, 1)],
            epochs: 50,
            batch_size: 32,
            seed: 0,
            optimizer: AdamConfig::default(),
            masked_loss: false,
        }
    }
}

impl AeConfig {
    /// Input shapes `(channels, height, width)` seen by each encoder conv,
    /// followed by the shape after the last conv.
    pub fn encoder_shapes(&self) -> Result<Vec<[usize; 3]>> {
        if self.max_sent == 0 || self.embed_dim == 0 || self.latent_dim == 0 {
            return Err(Error::arg("max_sent, embed_dim and latent_dim must be positive"));
        }
        if self.channels.is_empty() {
            return Err(Error::arg("autoencoder needs at least one conv layer"));
        }
        let mut shapes = vec![[1, self.max_sent, self.embed_dim]];
        for (i, spec) in self.channels.iter().enumerate() {
            let [_, h, w] = *shapes.last().unwrap();
            if spec.out_channels == 0 || spec.kernel == 0 {
                return Err(Error::arg(format!("conv {i}: channels and kernel must be positive")));
            }
            if spec.kernel % 2 == 0 {
                return Err(Error::arg(format!("conv {i}: kernel must be odd so the decoder can mirror it")));
            }
            let (Some(oh), Some(ow)) = (
                conv_output_dim(h, spec.kernel, spec.stride, spec.padding),
                conv_output_dim(w, spec.kernel, spec.stride, spec.padding),
            ) else {
                return Err(Error::shape(format!(
                    "conv {i}: kernel {} stride {} padding {} leaves no spatial extent on {h}x{w}",
                    spec.kernel, spec.stride, spec.padding
                )));
            };
            let mirrorable = match spec.stride {
                1 => (oh, ow) == (h, w),
                2 => oh == h.div_ceil(2) && ow == w.div_ceil(2),
                _ => false,
            };
            if !mirrorable {
                return Err(Error::arg(format!(
                    "conv {i}: {h}x{w} -> {oh}x{ow} cannot be mirrored; use stride 1 with same padding or stride 2 with padding kernel/2"
                )));
            }
            shapes.push([spec.out_channels, oh, ow]);
        }
        Ok(shapes)
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::arg("epochs and batch_size must be positive"));
        }
        self.encoder_shapes().map(|_| ())
    }
}
