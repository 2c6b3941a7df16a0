use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Layer, Tensor};

#[derive(Debug, Clone, Default)]
pub struct Relu<T> {
    cached_shape: Option<Vec<usize>>,
    active: Vec<bool>,
    _scalar: PhantomData<T>,
}

impl<T> Relu<T> {
    pub fn new() -> Self {
        Relu { cached_shape: None, active: Vec::new(), _scalar: PhantomData }
    }
}

impl<T: Scalar> Layer<T> for Relu<T> {
    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        input.check_finite("relu input")?;
        Ok(input.map(|x| if x > T::zero() { x } else { T::zero() }))
    }

    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let out = self.infer(input)?;
        self.active = input.data().iter().map(|&x| x > T::zero()).collect();
        self.cached_shape = Some(input.shape().to_vec());
        Ok(out)
    }

    fn backward(&mut self, upstream: &Tensor<T>) -> Result<Tensor<T>> {
        let shape = self
            .cached_shape
            .as_ref()
            .ok_or_else(|| Error::State("relu backward called before forward".into()))?;
        if upstream.shape() != shape.as_slice() {
            return Err(Error::shape(format!(
                "relu upstream gradient must be {shape:?}, got {:?}",
                upstream.shape()
            )));
        }
        let data = upstream
            .data()
            .iter()
            .zip(&self.active)
            .map(|(&g, &on)| if on { g } else { T::zero() })
            .collect();
        Tensor::new(shape.clone(), data)
    }

    fn output_shape(&self, input_shape: &[usize]) -> Result<Vec<usize>> {
        Ok(input_shape.to_vec())
    }
}
