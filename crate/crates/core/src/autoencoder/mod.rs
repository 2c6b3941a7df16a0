//! Convolutional autoencoder over document embedding matrices.
//!
//! The encoder is a strided conv stack followed by a dense projection to the
//! latent code; the decoder mirrors it with a dense layer, nearest-neighbour
//! upsampling and stride-1 convolutions, ending in a linear 1-channel conv.

mod config;
mod model;
mod persist;

pub use config::{AeConfig, ConvSpec};
pub use model::{train_autoencoder, AutoencoderModel, FeatureVector};
