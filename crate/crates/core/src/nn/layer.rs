use crate::error::Result;
use crate::scalar::Scalar;

use super::{Conv2d, Dense, Relu, Reshape, Tensor, Upsample2x};

/// A differentiable stage.
///
/// `infer` is pure and may be shared across threads. `forward` additionally
/// caches what `backward` needs. `backward` takes the loss gradient with
/// respect to the forward output, accumulates parameter gradients and returns
/// the gradient with respect to the forward input.
pub trait Layer<T: Scalar> {
    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>>;

    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>>;

    fn backward(&mut self, upstream: &Tensor<T>) -> Result<Tensor<T>>;

    fn params(&self) -> Vec<&Tensor<T>> {
        Vec::new()
    }

    fn grads(&self) -> Vec<&Tensor<T>> {
        Vec::new()
    }

    /// Index-aligned `(parameter, gradient)` pairs.
    fn params_and_grads(&mut self) -> Vec<(&mut Tensor<T>, &mut Tensor<T>)> {
        Vec::new()
    }

    fn zero_grad(&mut self) {
        for (_, g) in self.params_and_grads() {
            g.fill(T::zero());
        }
    }

    /// Names of the parameter tensors, aligned with `params`.
    fn param_names(&self) -> &'static [&'static str] {
        &[]
    }

    fn output_shape(&self, input_shape: &[usize]) -> Result<Vec<usize>>;
}

/// Closed set of layers used by the autoencoder.
#[derive(Debug, Clone)]
pub enum LayerKind<T> {
    Conv2d(Conv2d<T>),
    Dense(Dense<T>),
    Relu(Relu<T>),
    Upsample2x(Upsample2x<T>),
    Reshape(Reshape),
}

impl<T> LayerKind<T> {
    pub fn kind_name(&self) -> &'static str {
        match self {
            LayerKind::Conv2d(_) => "conv2d",
            LayerKind::Dense(_) => "dense",
            LayerKind::Relu(_) => "relu",
            LayerKind::Upsample2x(_) => "upsample2x",
            LayerKind::Reshape(_) => "reshape",
        }
    }
}

macro_rules! dispatch {
    ($self:expr, $l:ident => $body:expr) => {
        match $self {
            LayerKind::Conv2d($l) => $body,
            LayerKind::Dense($l) => $body,
            LayerKind::Relu($l) => $body,
            LayerKind::Upsample2x($l) => $body,
            LayerKind::Reshape($l) => $body,
        }
    };
}

impl<T: Scalar> Layer<T> for LayerKind<T> {
    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        dispatch!(self, l => Layer::<T>::infer(l, input))
    }

    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        dispatch!(self, l => Layer::<T>::forward(l, input))
    }

    fn backward(&mut self, upstream: &Tensor<T>) -> Result<Tensor<T>> {
        dispatch!(self, l => Layer::<T>::backward(l, upstream))
    }

    fn params(&self) -> Vec<&Tensor<T>> {
        dispatch!(self, l => Layer::<T>::params(l))
    }

    fn grads(&self) -> Vec<&Tensor<T>> {
        dispatch!(self, l => Layer::<T>::grads(l))
    }

    fn params_and_grads(&mut self) -> Vec<(&mut Tensor<T>, &mut Tensor<T>)> {
        dispatch!(self, l => Layer::<T>::params_and_grads(l))
    }

    fn zero_grad(&mut self) {
        dispatch!(self, l => Layer::<T>::zero_grad(l))
    }

    fn param_names(&self) -> &'static [&'static str] {
        dispatch!(self, l => Layer::<T>::param_names(l))
    }

    fn output_shape(&self, input_shape: &[usize]) -> Result<Vec<usize>> {
        dispatch!(self, l => Layer::<T>::output_shape(l, input_shape))
    }
}
