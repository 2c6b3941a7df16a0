//! Small dense routines on row-major `d × d` matrices.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn mean_vector<T: Scalar>(vectors: &[Vec<T>]) -> Vec<T> {
    let d = vectors[0].len();
    let n = T::of_usize(vectors.len());
    let mut mean = vec![T::zero(); d];
    for v in vectors {
        mean.iter_mut().zip(v).for_each(|(m, &x)| *m += x);
    }
    mean.iter_mut().for_each(|m| *m /= n);
    mean
}

/// Biased (`1/N`) sample covariance around `mean`.
pub fn covariance<T: Scalar>(vectors: &[Vec<T>], mean: &[T]) -> Vec<T> {
    let d = mean.len();
    let n = T::of_usize(vectors.len());
    let mut cov = vec![T::zero(); d * d];
    let mut centred = vec![T::zero(); d];
    for v in vectors {
        centred.iter_mut().zip(v.iter().zip(mean)).for_each(|(c, (&x, &m))| *c = x - m);
        for i in 0..d {
            let ci = centred[i];
            for j in i..d {
                cov[i * d + j] += ci * centred[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            let v = cov[i * d + j] / n;
            cov[i * d + j] = v;
            cov[j * d + i] = v;
        }
    }
    cov
}

/// Lower-triangular `L` with `L Lᵀ = a`.
pub fn cholesky<T: Scalar>(a: &[T], d: usize) -> Result<Vec<T>> {
    let mut l = vec![T::zero(); d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = a[i * d + j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            if i == j {
                if s.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) || !s.is_finite() {
                    return Err(Error::Numerical(format!(
                        "matrix is not positive definite (pivot {i} = {s})"
                    )));
                }
                l[i * d + i] = s.sqrt();
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    Ok(l)
}

/// Solves `L y = b` by forward substitution.
pub fn cholesky_solve_lower<T: Scalar>(l: &[T], b: &[T]) -> Vec<T> {
    let d = b.len();
    let mut y = vec![T::zero(); d];
    for i in 0..d {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * d + k] * y[k];
        }
        y[i] = s / l[i * d + i];
    }
    y
}

#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    /// Non-increasing.
    pub values: Vec<T>,
    /// `vectors[i]` is the unit eigenvector for `values[i]`.
    pub vectors: Vec<Vec<T>>,
    pub sweeps: usize,
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Converges when the off-diagonal Frobenius norm drops below
/// `max(1e-10 · max(1, ‖A‖_F), 8 ε ‖A‖_F)`, the second term only mattering in
/// single precision.
pub fn jacobi_eigen<T: Scalar>(a: &[T], d: usize) -> Result<SymmetricEigen<T>> {
    if a.len() != d * d {
        return Err(Error::shape(format!("expected a {d}x{d} matrix, got {} values", a.len())));
    }
    let mut m = a.to_vec();
    let mut v = vec![T::zero(); d * d];
    for i in 0..d {
        v[i * d + i] = T::one();
    }
    let frob = m.iter().map(|&x| x * x).sum::<T>().sqrt();
    let tol = (T::of(1e-10) * frob.max(T::one())).max(T::of(8.0) * T::epsilon() * frob);
    let off_norm = |m: &[T]| {
        let mut s = T::zero();
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += m[i * d + j] * m[i * d + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&m) >= tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical(format!("Jacobi did not converge in {MAX_SWEEPS} sweeps")));
        }
        sweeps += 1;
        for p in 0..d {
            for q in p + 1..d {
                let apq = m[p * d + q];
                if apq == T::zero() {
                    continue;
                }
                let theta = (m[q * d + q] - m[p * d + p]) / (T::of(2.0) * apq);
                let t = if theta.abs() > T::of(1e30) {
                    T::one() / (T::of(2.0) * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..d {
                    let (kp, kq) = (m[k * d + p], m[k * d + q]);
                    m[k * d + p] = c * kp - s * kq;
                    m[k * d + q] = s * kp + c * kq;
                }
                for k in 0..d {
                    let (pk, qk) = (m[p * d + k], m[q * d + k]);
                    m[p * d + k] = c * pk - s * qk;
                    m[q * d + k] = s * pk + c * qk;
                }
                for k in 0..d {
                    let (kp, kq) = (v[k * d + p], v[k * d + q]);
                    v[k * d + p] = c * kp - s * kq;
                    v[k * d + q] = s * kp + c * kq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[j * d + j].partial_cmp(&m[i * d + i]).unwrap_or(std::cmp::Ordering::Equal).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[i * d + i]).collect();
    let vectors = order.iter().map(|&i| (0..d).map(|k| v[k * d + i]).collect()).collect();
    Ok(SymmetricEigen { values, vectors, sweeps })
}
