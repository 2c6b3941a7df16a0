use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::linalg::{cholesky, cholesky_solve_lower, covariance, mean_vector};

/// Multivariate Gaussian fitted by sample moments, with `ε·I` added to the
/// covariance before factorisation.
#[derive(Debug, Clone)]
pub struct GaussianModel<T> {
    pub dim: usize,
    pub mean: Vec<T>,
    /// Biased sample covariance, row-major, without the regulariser.
    pub covariance: Vec<T>,
    pub epsilon: T,
    /// Lower Cholesky factor of `covariance + ε·I`.
    chol: Vec<T>,
}

pub fn fit_gaussian<T: Scalar>(vectors: &[Vec<T>], epsilon: T) -> Result<GaussianModel<T>> {
    let Some(first) = vectors.first() else {
        return Err(Error::arg("cannot fit a Gaussian to zero vectors"));
    };
    let dim = first.len();
    if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::shape("all vectors must share one positive dimension"));
    }
    if epsilon < T::zero() {
        return Err(Error::arg("regularisation must be non-negative"));
    }
    if vectors.len() < dim + 1 {
        log::warn!(
            "fitting a {dim}-dimensional Gaussian to {} vectors: covariance is rank-deficient, relying on epsilon = {epsilon}",
            vectors.len()
        );
    }
    let mean = mean_vector(vectors);
    let covariance = covariance(vectors, &mean);
    let mut reg = covariance.clone();
    for i in 0..dim {
        reg[i * dim + i] += epsilon;
    }
    let chol = cholesky(&reg, dim)?;
    Ok(GaussianModel { dim, mean, covariance, epsilon, chol })
}

impl<T: Scalar> GaussianModel<T> {
    /// `(x − μ)ᵀ (Σ + εI)⁻¹ (x − μ)` via the Cholesky factor.
    pub fn mahalanobis_sq(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim {
            return Err(Error::shape(format!("expected a {}-vector, got {}", self.dim, x.len())));
        }
        let diff: Vec<T> = x.iter().zip(&self.mean).map(|(&a, &m)| a - m).collect();
        let y = cholesky_solve_lower(&self.chol, &diff);
        Ok(y.iter().map(|&v| v * v).sum())
    }

    /// Univariate normal density; only defined for `dim == 1`.
    pub fn density(&self, x: T) -> Result<T> {
        if self.dim != 1 {
            return Err(Error::arg(format!(
                "density is only provided for one dimension, model has {}",
                self.dim
            )));
        }
        let var = self.covariance[0] + self.epsilon;
        if var.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return Err(Error::Numerical("variance must be positive".into()));
        }
        let two_pi = T::of(2.0 * std::f64::consts::PI);
        let z = x - self.mean[0];
        Ok((-(z * z) / (T::of(2.0) * var)).exp() / (two_pi * var).sqrt())
    }
}
