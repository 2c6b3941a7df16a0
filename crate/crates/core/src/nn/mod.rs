//! Minimal tensor and layer core: convolution, dense, ReLU, nearest-neighbour
//! upsampling, reshape, MSE loss and Adam. Gradients are analytic; the test
//! suites check them against central finite differences.

mod adam;
mod conv;
mod dense;
mod init;
mod layer;
mod loss;
mod relu;
mod reshape;
mod tensor;
mod upsample;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use conv::{conv_output_dim, Conv2d};
pub use dense::Dense;
pub use init::glorot_uniform;
pub use layer::{Layer, LayerKind};
pub use loss::{masked_mse_loss, mse_loss};
pub use relu::Relu;
pub use reshape::Reshape;
pub use tensor::Tensor;
pub use upsample::Upsample2x;
