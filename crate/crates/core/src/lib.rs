//! Outlier document detection over sentence-embedding matrices.
//!
//! A document is a `(max_sent × embed_dim)` matrix of sentence embeddings.
//! A small convolutional autoencoder compresses it to a 32-dim latent code,
//! the reconstruction MSE is appended as a 33rd feature, and an oversampled
//! logistic regression makes the final normal/outlier decision. Gaussian
//! Mahalanobis and PCA reconstruction scorers are provided as baselines.
//!
//! The numeric core ([`nn`], [`autoencoder`], [`baselines`], [`classifier`])
//! is generic over [`Scalar`]; the aliases below fix it to `f64`, which is what
//! the file formats and the command line use.

pub mod autoencoder;
pub mod baselines;
pub mod checkpoint;
pub mod classifier;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod nn;
pub mod pipeline;
pub mod rng;
pub mod scalar;
pub mod synthetic;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Tensor = nn::Tensor<f64>;
pub type Tensor32 = nn::Tensor<f32>;
pub type AutoencoderModel = autoencoder::AutoencoderModel<f64>;
pub type FeatureVector = autoencoder::FeatureVector<f64>;
pub type GaussianModel = baselines::GaussianModel<f64>;
pub type PcaModel = baselines::PcaModel<f64>;
pub type LogisticModel = classifier::LogisticModel<f64>;
pub type Standardizer = classifier::Standardizer<f64>;
pub type PipelineModel = pipeline::PipelineModel<f64>;
