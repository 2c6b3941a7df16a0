use rand::Rng as _;

use crate::rng::Rng;
use crate::scalar::Scalar;

/// Uniform Glorot/Xavier sample in `±sqrt(6 / (fan_in + fan_out))`.
pub fn glorot_uniform<T: Scalar>(rng: &mut Rng, n: usize, fan_in: usize, fan_out: usize) -> Vec<T> {
    let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
    (0..n).map(|_| T::of(rng.random_range(-limit..limit))).collect()
}
