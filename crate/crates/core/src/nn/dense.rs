use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Scalar;

use super::{glorot_uniform, Layer, Tensor};

/// Fully connected affine map `weight · x + bias` over a 1-d input.
#[derive(Debug, Clone)]
pub struct Dense<T> {
    pub in_dim: usize,
    pub out_dim: usize,
    /// `(out_dim, in_dim)`
    pub weight: Tensor<T>,
    pub bias: Tensor<T>,
    weight_grad: Tensor<T>,
    bias_grad: Tensor<T>,
    cached_input: Option<Tensor<T>>,
}

impl<T: Scalar> Dense<T> {
    pub fn new(in_dim: usize, out_dim: usize, rng: &mut Rng) -> Result<Self> {
        let weight = Tensor::new(vec![out_dim, in_dim], glorot_uniform(rng, in_dim * out_dim, in_dim, out_dim))?;
        let bias = Tensor::new(vec![out_dim], vec![T::zero(); out_dim])?;
        Self::from_params(weight, bias)
    }

    pub fn from_params(weight: Tensor<T>, bias: Tensor<T>) -> Result<Self> {
        let &[out_dim, in_dim] = weight.shape() else {
            return Err(Error::shape(format!("dense weight must be 2-d, got {:?}", weight.shape())));
        };
        if bias.shape() != [out_dim] {
            return Err(Error::shape(format!(
                "dense bias must have shape [{out_dim}], got {:?}",
                bias.shape()
            )));
        }
        Ok(Dense {
            in_dim,
            out_dim,
            weight_grad: Tensor::zeros(weight.shape()),
            bias_grad: Tensor::zeros(bias.shape()),
            weight,
            bias,
            cached_input: None,
        })
    }

    pub fn weight_grad(&self) -> &Tensor<T> {
        &self.weight_grad
    }

    pub fn bias_grad(&self) -> &Tensor<T> {
        &self.bias_grad
    }

    fn check_input(&self, shape: &[usize]) -> Result<()> {
        if shape != [self.in_dim] {
            return Err(Error::shape(format!("dense expects input [{}], got {shape:?}", self.in_dim)));
        }
        Ok(())
    }
}

impl<T: Scalar> Layer<T> for Dense<T> {
    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        self.check_input(input.shape())?;
        input.check_finite("dense input")?;
        let x = input.data();
        let out = self
            .weight
            .data()
            .chunks_exact(self.in_dim)
            .zip(self.bias.data())
            .map(|(row, &b)| b + row.iter().zip(x).map(|(&w, &xi)| w * xi).sum::<T>())
            .collect();
        Tensor::new(vec![self.out_dim], out)
    }

    fn forward(&mut self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let out = self.infer(input)?;
        self.cached_input = Some(input.clone());
        Ok(out)
    }

    fn backward(&mut self, upstream: &Tensor<T>) -> Result<Tensor<T>> {
        let input = self
            .cached_input
            .as_ref()
            .ok_or_else(|| Error::State("dense backward called before forward".into()))?;
        if upstream.shape() != [self.out_dim] {
            return Err(Error::shape(format!(
                "dense upstream gradient must be [{}], got {:?}",
                self.out_dim,
                upstream.shape()
            )));
        }
        upstream.check_finite("dense upstream gradient")?;
        let x = input.data();
        let mut dx = vec![T::zero(); self.in_dim];
        let rows = self.weight.data().chunks_exact(self.in_dim);
        let grad_rows = self.weight_grad.data_mut().chunks_exact_mut(self.in_dim);
        for ((row, grow), (&g, gb)) in rows
            .zip(grad_rows)
            .zip(upstream.data().iter().zip(self.bias_grad.data_mut()))
        {
            *gb += g;
            for i in 0..self.in_dim {
                grow[i] += g * x[i];
                dx[i] += g * row[i];
            }
        }
        Tensor::new(vec![self.in_dim], dx)
    }

    fn params(&self) -> Vec<&Tensor<T>> {
        vec![&self.weight, &self.bias]
    }

    fn grads(&self) -> Vec<&Tensor<T>> {
        vec![&self.weight_grad, &self.bias_grad]
    }

    fn params_and_grads(&mut self) -> Vec<(&mut Tensor<T>, &mut Tensor<T>)> {
        vec![(&mut self.weight, &mut self.weight_grad), (&mut self.bias, &mut self.bias_grad)]
    }

    fn param_names(&self) -> &'static [&'static str] {
        &["weight", "bias"]
    }

    fn output_shape(&self, input_shape: &[usize]) -> Result<Vec<usize>> {
        self.check_input(input_shape)?;
        Ok(vec![self.out_dim])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(shape: &[usize], data: &[f64]) -> Tensor<f64> {
        Tensor::new(shape.to_vec(), data.to_vec()).unwrap()
    }

    #[test]
    fn identity_weight() {
        let d = Dense::from_params(t(&[2, 2], &[1.0, 0.0, 0.0, 1.0]), t(&[2], &[0.0, 0.0])).unwrap();
        assert_eq!(d.infer(&t(&[2], &[3.0, -7.0])).unwrap().data(), &[3.0, -7.0]);
    }

    #[test]
    fn affine_by_hand() {
        let d = Dense::from_params(t(&[2, 2], &[1.0, 2.0, 3.0, 4.0]), t(&[2], &[1.0, 1.0])).unwrap();
        assert_eq!(d.infer(&t(&[2], &[1.0, 1.0])).unwrap().data(), &[4.0, 8.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let mut rng = crate::rng::seeded(1);
        let mut d = Dense::<f64>::new(3, 2, &mut rng).unwrap();
        assert!(matches!(d.infer(&Tensor::zeros(&[4])), Err(Error::Shape(_))));
        assert!(matches!(d.backward(&Tensor::zeros(&[2])), Err(Error::State(_))));
        d.forward(&Tensor::zeros(&[3])).unwrap();
        assert!(matches!(d.backward(&Tensor::zeros(&[3])), Err(Error::Shape(_))));
    }
}
