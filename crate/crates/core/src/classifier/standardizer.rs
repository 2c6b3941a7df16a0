use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-feature z-scoring. Standard deviations below `1e-12` are replaced by 1
/// so constant features pass through centred.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer<T> {
    pub mean: Vec<T>,
    pub std: Vec<T>,
}

impl<T: Scalar> Standardizer<T> {
    pub fn fit(rows: &[Vec<T>]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::arg("cannot fit a standardizer to zero rows"));
        };
        let d = first.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::shape("feature rows differ in length"));
        }
        let n = T::of_usize(rows.len());
        let mut mean = vec![T::zero(); d];
        for r in rows {
            mean.iter_mut().zip(r).for_each(|(m, &x)| *m += x);
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![T::zero(); d];
        for r in rows {
            var.iter_mut().zip(r.iter().zip(&mean)).for_each(|(v, (&x, &m))| *v += (x - m) * (x - m));
        }
        let floor = T::of(1e-12);
        let std = var.into_iter().map(|v| (v / n).sqrt()).map(|s| if s < floor { T::one() } else { s }).collect();
        Ok(Standardizer { mean, std })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn transform(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim() {
            return Err(Error::shape(format!("expected {} features, got {}", self.dim(), x.len())));
        }
        Ok(x.iter().zip(self.mean.iter().zip(&self.std)).map(|(&v, (&m, &s))| (v - m) / s).collect())
    }
}
