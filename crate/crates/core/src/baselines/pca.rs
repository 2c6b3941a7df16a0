use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::linalg::{covariance, jacobi_eigen, mean_vector};

/// Principal subspace of the sample covariance.
#[derive(Debug, Clone)]
pub struct PcaModel<T> {
    pub mean: Vec<T>,
    /// `k` orthonormal rows of length `d`, by decreasing eigenvalue.
    pub components: Vec<Vec<T>>,
    pub eigenvalues: Vec<T>,
    /// Full spectrum of the covariance, including discarded directions.
    pub all_eigenvalues: Vec<T>,
}

impl<T: Scalar> PcaModel<T> {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// `‖r − CᵀC r‖²` with `r = x − μ`.
    pub fn recon_error(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim() {
            return Err(Error::shape(format!("expected a {}-vector, got {}", self.dim(), x.len())));
        }
        let mut r: Vec<T> = x.iter().zip(&self.mean).map(|(&a, &m)| a - m).collect();
        let coords: Vec<T> = self.components.iter().map(|c| c.iter().zip(&r).map(|(&a, &b)| a * b).sum()).collect();
        for (c, &w) in self.components.iter().zip(&coords) {
            r.iter_mut().zip(c).for_each(|(ri, &ci)| *ri -= w * ci);
        }
        Ok(r.iter().map(|&v| v * v).sum())
    }

    /// Coordinates of `x − μ` in the retained basis.
    pub fn project(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim() {
            return Err(Error::shape(format!("expected a {}-vector, got {}", self.dim(), x.len())));
        }
        Ok(self
            .components
            .iter()
            .map(|c| c.iter().zip(x.iter().zip(&self.mean)).map(|(&ci, (&xi, &m))| ci * (xi - m)).sum())
            .collect())
    }
}

pub fn fit_pca<T: Scalar>(vectors: &[Vec<T>], k: usize) -> Result<PcaModel<T>> {
    if vectors.len() < 2 {
        return Err(Error::arg("PCA needs at least two vectors"));
    }
    let d = vectors[0].len();
    if d == 0 || vectors.iter().any(|v| v.len() != d) {
        return Err(Error::shape("all vectors must share one positive dimension"));
    }
    if k == 0 || k > d {
        return Err(Error::arg(format!("component count must be in 1..={d}, got {k}")));
    }
    let mean = mean_vector(vectors);
    let cov = covariance(vectors, &mean);
    let eig = jacobi_eigen(&cov, d)?;
    let all_eigenvalues = eig.values.clone();
    let eigenvalues = eig.values.into_iter().take(k).map(|v| v.max(T::zero())).collect();
    let components = eig.vectors.into_iter().take(k).collect();
    Ok(PcaModel { mean, components, eigenvalues, all_eigenvalues })
}
