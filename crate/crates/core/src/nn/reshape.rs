use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Layer, Tensor};

/// Reinterprets the row-major buffer under a new shape.
#[derive(Debug, Clone)]
pub struct Reshape {
    pub target: Vec<usize>,
    cached_shape: Option<Vec<usize>>,
}

impl Reshape {
    pub fn new(target: Vec<usize>) -> Self {
        Reshape { target, cached_shape: None }
    }
}

impl<T: Scalar> Layer<T> for Reshape {
    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        input.clone().reshaped(self.target.clone())
    }

    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let out = Layer::<T>::infer(self, input)?;
        self.cached_shape = Some(input.shape().to_vec());
        Ok(out)
    }

    fn backward(&mut self, upstream: &Tensor<T>) -> Result<Tensor<T>> {
        let shape = self
            .cached_shape
            .clone()
            .ok_or_else(|| Error::State("reshape backward called before forward".into()))?;
        if upstream.shape() != self.target.as_slice() {
            return Err(Error::shape(format!(
                "reshape upstream gradient must be {:?}, got {:?}",
                self.target,
                upstream.shape()
            )));
        }
        upstream.clone().reshaped(shape)
    }

    fn output_shape(&self, input_shape: &[usize]) -> Result<Vec<usize>> {
        let n: usize = input_shape.iter().product();
        let m: usize = self.target.iter().product();
        if n != m {
            return Err(Error::shape(format!("cannot reshape {input_shape:?} into {:?}", self.target)));
        }
        Ok(self.target.clone())
    }
}
