use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Tensor;

/// Mean squared error and its gradient `2·(prediction − target)/N`.
pub fn mse_loss<T: Scalar>(prediction: &Tensor<T>, target: &Tensor<T>) -> Result<(T, Tensor<T>)> {
    if prediction.shape() != target.shape() {
        return Err(Error::shape(format!(
            "mse prediction {:?} vs target {:?}",
            prediction.shape(),
            target.shape()
        )));
    }
    let n = T::of_usize(prediction.len());
    let two = T::of(2.0);
    let diff: Vec<T> = prediction.data().iter().zip(target.data()).map(|(&p, &t)| p - t).collect();
    let loss = diff.iter().map(|&d| d * d).sum::<T>() / n;
    let grad = Tensor::new(prediction.shape().to_vec(), diff.into_iter().map(|d| two * d / n).collect())?;
    Ok((loss, grad))
}

/// MSE restricted to elements where `mask` is true; masked-out elements get
/// zero gradient. An all-false mask yields zero loss.
pub fn masked_mse_loss<T: Scalar>(
    prediction: &Tensor<T>,
    target: &Tensor<T>,
    mask: &[bool],
) -> Result<(T, Tensor<T>)> {
    if prediction.shape() != target.shape() || mask.len() != prediction.len() {
        return Err(Error::shape(format!(
            "masked mse prediction {:?}, target {:?}, mask length {}",
            prediction.shape(),
            target.shape(),
            mask.len()
        )));
    }
    let count = mask.iter().filter(|&&m| m).count();
    if count == 0 {
        return Ok((T::zero(), Tensor::zeros(prediction.shape())));
    }
    let n = T::of_usize(count);
    let two = T::of(2.0);
    let mut loss = T::zero();
    let mut grad = Vec::with_capacity(mask.len());
    for ((&p, &t), &m) in prediction.data().iter().zip(target.data()).zip(mask) {
        if m {
            let d = p - t;
            loss += d * d;
            grad.push(two * d / n);
        } else {
            grad.push(T::zero());
        }
    }
    Ok((loss / n, Tensor::new(prediction.shape().to_vec(), grad)?))
}
