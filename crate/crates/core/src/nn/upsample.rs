use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Layer, Tensor};

/// Nearest-neighbour 2× upsampling of a `(channels, height, width)` tensor:
/// every cell is duplicated into a 2×2 block. An optional target size crops
/// the last row/column so odd encoder extents can be mirrored exactly.
#[derive(Debug, Clone)]
pub struct Upsample2x<T> {
    pub target: Option<(usize, usize)>,
    cached_shape: Option<Vec<usize>>,
    _scalar: PhantomData<T>,
}

impl<T> Default for Upsample2x<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> Upsample2x<T> {
    pub fn new() -> Self {
        Upsample2x { target: None, cached_shape: None, _scalar: PhantomData }
    }

    /// Upsample then crop to `(height, width)`; each must be `2n` or `2n − 1`
    /// for input extent `n`.
    pub fn to_size(height: usize, width: usize) -> Self {
        Upsample2x { target: Some((height, width)), cached_shape: None, _scalar: PhantomData }
    }

    fn dims(&self, input_shape: &[usize]) -> Result<(usize, usize, usize, usize, usize)> {
        let &[c, h, w] = input_shape else {
            return Err(Error::shape(format!(
                "upsample input must be (channels, height, width), got {input_shape:?}"
            )));
        };
        let (oh, ow) = self.target.unwrap_or((2 * h, 2 * w));
        if oh.div_ceil(2) != h || ow.div_ceil(2) != w {
            return Err(Error::shape(format!("cannot upsample {h}x{w} to {oh}x{ow}")));
        }
        Ok((c, h, w, oh, ow))
    }
}

impl<T: Scalar> Layer<T> for Upsample2x<T> {
    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let (c, h, w, oh, ow) = self.dims(input.shape())?;
        let x = input.data();
        let mut out = Vec::with_capacity(c * oh * ow);
        for ch in 0..c {
            for y in 0..oh {
                let row = &x[(ch * h + y / 2) * w..(ch * h + y / 2 + 1) * w];
                out.extend((0..ow).map(|xo| row[xo / 2]));
            }
        }
        Tensor::new(vec![c, oh, ow], out)
    }

    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let out = self.infer(input)?;
        self.cached_shape = Some(input.shape().to_vec());
        Ok(out)
    }

    fn backward(&mut self, upstream: &Tensor<T>) -> Result<Tensor<T>> {
        let shape = self
            .cached_shape
            .clone()
            .ok_or_else(|| Error::State("upsample backward called before forward".into()))?;
        let (c, h, w, oh, ow) = self.dims(&shape)?;
        if upstream.shape() != [c, oh, ow] {
            return Err(Error::shape(format!(
                "upsample upstream gradient must be {:?}, got {:?}",
                [c, oh, ow],
                upstream.shape()
            )));
        }
        let up = upstream.data();
        let mut dx = vec![T::zero(); c * h * w];
        for ch in 0..c {
            for y in 0..oh {
                for xo in 0..ow {
                    dx[(ch * h + y / 2) * w + xo / 2] += up[(ch * oh + y) * ow + xo];
                }
            }
        }
        Tensor::new(shape, dx)
    }

    fn output_shape(&self, input_shape: &[usize]) -> Result<Vec<usize>> {
        let (c, _, _, oh, ow) = self.dims(input_shape)?;
        Ok(vec![c, oh, ow])
    }
}
