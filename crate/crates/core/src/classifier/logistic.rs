use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::autoencoder::FeatureVector;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::scalar::Scalar;

use super::Standardizer;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogregConfig {
    pub lambda: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub threshold: f64,
    pub seed: u64,
}

impl Default for LogregConfig {
    fn default() -> Self {
        LogregConfig { lambda: 1e-4, learning_rate: 0.1, epochs: 2000, threshold: 0.5, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainingSummary {
    pub epochs: usize,
    pub initial_loss: f64,
    pub final_loss: f64,
    pub final_grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel<T> {
    pub weights: Vec<T>,
    pub bias: T,
    pub lambda: f64,
    pub threshold: f64,
    pub standardizer: Standardizer<T>,
    pub summary: TrainingSummary,
}

/// Numerically stable logistic function.
pub fn sigmoid<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus<T: Scalar>(z: T) -> T {
    z.max(T::zero()) + (-z.abs()).exp().ln_1p()
}

/// Mean cross-entropy plus `(λ/2)‖w‖²` on already-standardised rows, with its
/// gradient `(∂w, ∂b)`.
pub fn logistic_objective<T: Scalar>(
    weights: &[T],
    bias: T,
    rows: &[Vec<T>],
    labels: &[Label],
    lambda: T,
) -> (T, Vec<T>, T) {
    let n = T::of_usize(rows.len());
    let mut loss = T::zero();
    let mut gw = vec![T::zero(); weights.len()];
    let mut gb = T::zero();
    for (x, &label) in rows.iter().zip(labels) {
        let y = if label.is_outlier() { T::one() } else { T::zero() };
        let z = bias + weights.iter().zip(x).map(|(&w, &xi)| w * xi).sum::<T>();
        loss += softplus(z) - y * z;
        let r = sigmoid(z) - y;
        gw.iter_mut().zip(x).for_each(|(g, &xi)| *g += r * xi);
        gb += r;
    }
    let half = T::of(0.5);
    loss = loss / n + half * lambda * weights.iter().map(|&w| w * w).sum::<T>();
    gw.iter_mut().zip(weights).for_each(|(g, &w)| *g = *g / n + lambda * w);
    (loss, gw, gb / n)
}

impl<T: Scalar> LogisticModel<T> {
    /// Full-batch proximal gradient descent on the regularised objective:
    /// a gradient step on the cross-entropy followed by the closed-form L2
    /// shrink `w / (1 + lr·λ)`, which stays stable for any `λ`.
    pub fn fit(rows: &[Vec<T>], labels: &[Label], config: &LogregConfig) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::arg(format!("{} rows but {} labels", rows.len(), labels.len())));
        }
        let positives = labels.iter().filter(|l| l.is_outlier()).count();
        if positives == 0 || positives == labels.len() {
            return Err(Error::arg("logistic regression needs both classes present"));
        }
        let lambda_ok = config.lambda >= 0.0 && config.lambda.is_finite();
        let lr_ok = config.learning_rate > 0.0 && config.learning_rate.is_finite();
        if !lambda_ok || !lr_ok || config.threshold <= 0.0 || config.threshold.is_nan() || config.threshold >= 1.0 {
            return Err(Error::arg("need lambda >= 0, learning_rate > 0 and threshold in (0, 1)"));
        }
        let standardizer = Standardizer::fit(rows)?;
        let z: Vec<Vec<T>> = rows.iter().map(|r| standardizer.transform(r)).collect::<Result<_>>()?;
        let d = standardizer.dim();
        let mut rng = seeded(config.seed);
        let mut w: Vec<T> = (0..d).map(|_| T::of(rng.random_range(-0.01..0.01))).collect();
        let mut b = T::zero();
        let lambda = T::of(config.lambda);
        let lr = T::of(config.learning_rate);
        let shrink = T::one() / (T::one() + lr * lambda);

        let (initial, _, _) = logistic_objective(&w, b, &z, labels, lambda);
        for epoch in 0..config.epochs {
            let (loss, gw, gb) = logistic_objective(&w, b, &z, labels, T::zero());
            if !loss.is_finite() {
                return Err(Error::Training(format!("logistic loss became non-finite at epoch {epoch}")));
            }
            w.iter_mut().zip(&gw).for_each(|(wi, &g)| *wi = (*wi - lr * g) * shrink);
            b -= lr * gb;
        }
        let (final_loss, gw, gb) = logistic_objective(&w, b, &z, labels, lambda);
        if !final_loss.is_finite() || w.iter().any(|x| !x.is_finite()) || !b.is_finite() {
            return Err(Error::Training("logistic regression diverged".into()));
        }
        let grad_norm = (gw.iter().map(|&g| g * g).sum::<T>() + gb * gb).sqrt();
        Ok(LogisticModel {
            weights: w,
            bias: b,
            lambda: config.lambda,
            threshold: config.threshold,
            standardizer,
            summary: TrainingSummary {
                epochs: config.epochs,
                initial_loss: initial.as_f64(),
                final_loss: final_loss.as_f64(),
                final_grad_norm: grad_norm.as_f64(),
            },
        })
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// `w · standardize(x) + b`.
    pub fn decision(&self, x: &[T]) -> Result<T> {
        let z = self.standardizer.transform(x)?;
        Ok(self.bias + self.weights.iter().zip(&z).map(|(&w, &v)| w * v).sum::<T>())
    }

    /// Outlier probability, clamped into `[ε, 1 − ε]`.
    pub fn predict_proba(&self, x: &[T]) -> Result<T> {
        let eps = T::epsilon();
        Ok(sigmoid(self.decision(x)?).max(eps).min(T::one() - eps))
    }

    pub fn predict(&self, x: &[T]) -> Result<Label> {
        let p = self.predict_proba(x)?;
        Ok(if p.as_f64() >= self.threshold { Label::Outlier } else { Label::Normal })
    }
}

/// Fits on `(latent ⊕ recon_error, label)` pairs.
pub fn train_logreg<T: Scalar>(features: &[(FeatureVector<T>, Label)], config: &LogregConfig) -> Result<LogisticModel<T>> {
    let rows: Vec<Vec<T>> = features.iter().map(|(f, _)| f.to_vec()).collect();
    let labels: Vec<Label> = features.iter().map(|(_, l)| *l).collect();
    if let Some(r) = rows.first() {
        if rows.iter().any(|x| x.len() != r.len()) {
            return Err(Error::shape("feature vectors differ in length"));
        }
    }
    LogisticModel::fit(&rows, &labels, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// x = −1 → normal, x = +1 → outlier in slot 0 of a 33-vector, 50 each.
    fn separable() -> (Vec<Vec<f64>>, Vec<Label>) {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..100 {
            let mut x = vec![0.0; 33];
            x[0] = if i % 2 == 0 { -1.0 } else { 1.0 };
            rows.push(x);
            labels.push(if i % 2 == 0 { Label::Normal } else { Label::Outlier });
        }
        (rows, labels)
    }

    #[test]
    fn separates_toy_problem() {
        let (rows, labels) = separable();
        let m = LogisticModel::fit(&rows, &labels, &LogregConfig::default()).unwrap();
        for (x, l) in rows.iter().zip(&labels) {
            assert_eq!(m.predict(x).unwrap(), *l);
        }
        let p0 = m.predict_proba(&[0.0; 33]).unwrap();
        assert!((0.45..=0.55).contains(&p0), "{p0}");
        assert!(m.summary.final_loss <= m.summary.initial_loss);
    }

    #[test]
    fn heavy_regularisation_shrinks_weights() {
        let (rows, labels) = separable();
        let cfg = LogregConfig { lambda: 1e6, ..Default::default() };
        let m = LogisticModel::fit(&rows, &labels, &cfg).unwrap();
        let norm: f64 = m.weights.iter().map(|w| w * w).sum::<f64>().sqrt();
        assert!(norm < 1e-3, "{norm}");
    }

    #[test]
    fn zero_model_is_half() {
        let (rows, labels) = separable();
        let mut m = LogisticModel::fit(&rows, &labels, &LogregConfig { epochs: 0, ..Default::default() }).unwrap();
        m.weights.iter_mut().for_each(|w| *w = 0.0);
        m.bias = 0.0;
        assert_eq!(m.predict_proba(&rows[0]).unwrap(), 0.5);
        assert_eq!(m.predict(&rows[0]).unwrap(), Label::Outlier);
    }

    #[test]
    fn single_class_rejected() {
        let rows = vec![vec![1.0], vec![2.0]];
        assert!(LogisticModel::fit(&rows, &[Label::Normal, Label::Normal], &LogregConfig::default()).is_err());
        let m = LogisticModel::fit(&rows, &[Label::Normal, Label::Outlier], &LogregConfig::default()).unwrap();
        assert!(matches!(m.predict(&[1.0, 2.0]), Err(Error::Shape(_))));
    }
}
