use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::Tensor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig { learning_rate: 1e-3, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

/// Moment accumulators, index-aligned with the parameter list passed to
/// [`adam_step`]. They are zero-initialised on the first step.
#[derive(Debug, Clone)]
pub struct AdamState<T> {
    pub config: AdamConfig,
    pub step: u64,
    first: Vec<Tensor<T>>,
    second: Vec<Tensor<T>>,
}

impl<T: Scalar> AdamState<T> {
    pub fn new(config: AdamConfig) -> Self {
        AdamState { config, step: 0, first: Vec::new(), second: Vec::new() }
    }

    pub fn first_moments(&self) -> &[Tensor<T>] {
        &self.first
    }

    pub fn second_moments(&self) -> &[Tensor<T>] {
        &self.second
    }
}

/// One bias-corrected Adam update. Nothing is modified if any gradient is
/// non-finite or the parameter list does not match earlier steps.
pub fn adam_step<T: Scalar>(
    pairs: &mut [(&mut Tensor<T>, &mut Tensor<T>)],
    state: &mut AdamState<T>,
) -> Result<()> {
    for (i, (p, g)) in pairs.iter().enumerate() {
        if p.shape() != g.shape() {
            return Err(Error::shape(format!(
                "parameter {i} has shape {:?} but its gradient has {:?}",
                p.shape(),
                g.shape()
            )));
        }
        if !g.is_finite() {
            return Err(Error::Training(format!("non-finite gradient for parameter {i}")));
        }
    }
    if state.step == 0 {
        state.first = pairs.iter().map(|(p, _)| Tensor::zeros(p.shape())).collect();
        state.second = state.first.clone();
    } else if state.first.len() != pairs.len()
        || state.first.iter().zip(pairs.iter()).any(|(m, (p, _))| m.shape() != p.shape())
    {
        return Err(Error::shape("parameter list changed between Adam steps"));
    }

    state.step += 1;
    let cfg = state.config;
    let (b1, b2) = (T::of(cfg.beta1), T::of(cfg.beta2));
    let one = T::one();
    let t = state.step as i32;
    let bc1 = one - T::of(cfg.beta1.powi(t));
    let bc2 = one - T::of(cfg.beta2.powi(t));
    let lr = T::of(cfg.learning_rate);
    let eps = T::of(cfg.epsilon);

    for (((p, g), m), v) in pairs.iter_mut().zip(&mut state.first).zip(&mut state.second) {
        for (((w, &gi), mi), vi) in p
            .data_mut()
            .iter_mut()
            .zip(g.data())
            .zip(m.data_mut())
            .zip(v.data_mut())
        {
            *mi = b1 * *mi + (one - b1) * gi;
            *vi = b2 * *vi + (one - b2) * gi * gi;
            let m_hat = *mi / bc1;
            let v_hat = *vi / bc2;
            *w -= lr * m_hat / (v_hat.sqrt() + eps);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: f64) -> Tensor<f64> {
        Tensor::new(vec![1], vec![x]).unwrap()
    }

    #[test]
    fn zero_gradient_leaves_params() {
        let mut p = Tensor::new(vec![2], vec![0.3, -0.7]).unwrap();
        let mut g = Tensor::zeros(&[2]);
        let mut st = AdamState::new(AdamConfig::default());
        adam_step(&mut [(&mut p, &mut g)], &mut st).unwrap();
        assert_eq!(p.data(), &[0.3, -0.7]);
        assert_eq!(st.step, 1);
    }

    #[test]
    fn first_step_by_hand() {
        // m̂ = 1, v̂ = 1 after bias correction, so the step is lr / (1 + ε).
        let mut p = scalar(0.0);
        let mut g = scalar(1.0);
        let mut st = AdamState::new(AdamConfig { learning_rate: 0.1, ..Default::default() });
        adam_step(&mut [(&mut p, &mut g)], &mut st).unwrap();
        let expected = -0.1 / (1.0 + 1e-8);
        assert!((p.data()[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn constant_gradient_moves_monotonically_against_sign() {
        let mut p = scalar(1.0);
        let mut st = AdamState::new(AdamConfig::default());
        let mut prev = p.data()[0];
        for _ in 0..50 {
            let mut g = scalar(-2.0);
            adam_step(&mut [(&mut p, &mut g)], &mut st).unwrap();
            assert!(p.data()[0] > prev);
            prev = p.data()[0];
        }
    }

    #[test]
    fn rejects_non_finite_gradient() {
        let mut p = scalar(1.0);
        let mut g = scalar(f64::INFINITY);
        let mut st = AdamState::new(AdamConfig::default());
        assert!(matches!(adam_step(&mut [(&mut p, &mut g)], &mut st), Err(Error::Training(_))));
        assert_eq!(p.data()[0], 1.0);
        assert_eq!(st.step, 0);
    }
}
