//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.
#![allow(dead_code)]

use rand::Rng as _;
use textlier::nn::{Layer, Tensor};
use textlier::rng::{seeded, Rng};

/// Finite-difference step.
pub const H: f64 = 1e-5;

pub fn rng(seed: u64) -> Rng {
    seeded(seed)
}

pub fn random_vec(rng: &mut Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

pub fn random_tensor(rng: &mut Rng, shape: &[usize]) -> Tensor<f64> {
    Tensor::new(shape.to_vec(), random_vec(rng, shape.iter().product())).unwrap()
}

/// Central difference of `f` at every coordinate of `x`.
pub fn numeric_gradient(x: &[f64], h: f64, mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = probe[i];
            probe[i] = orig + h;
            let plus = f(&probe);
            probe[i] = orig - h;
            let minus = f(&probe);
            probe[i] = orig;
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

/// Largest elementwise `|a − n| / max(|a|, |n|, floor)`.
pub fn max_relative_error(analytic: &[f64], numeric: &[f64], floor: f64) -> f64 {
    assert_eq!(analytic.len(), numeric.len());
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(floor))
        .fold(0.0, f64::max)
}

/// Direct nested-loop cross-correlation with zero padding.
#[allow(clippy::too_many_arguments)]
pub fn reference_conv(
    input: &[f64],
    (c, h, w): (usize, usize, usize),
    weight: &[f64],
    bias: &[f64],
    (o, kh, kw): (usize, usize, usize),
    stride: usize,
    padding: usize,
) -> (Vec<f64>, usize, usize) {
    let oh = (h + 2 * padding - kh) / stride + 1;
    let ow = (w + 2 * padding - kw) / stride + 1;
    let mut out = vec![0.0; o * oh * ow];
    for oc in 0..o {
        for y in 0..oh {
            for x in 0..ow {
                let mut acc = bias[oc];
                for ic in 0..c {
                    for ky in 0..kh {
                        for kx in 0..kw {
                            let iy = (y * stride + ky) as isize - padding as isize;
                            let ix = (x * stride + kx) as isize - padding as isize;
                            if iy < 0 || ix < 0 || iy >= h as isize || ix >= w as isize {
                                continue;
                            }
                            let v = input[(ic * h + iy as usize) * w + ix as usize];
                            acc += weight[((oc * c + ic) * kh + ky) * kw + kx] * v;
                        }
                    }
                }
                out[(oc * oh + y) * ow + x] = acc;
            }
        }
    }
    (out, oh, ow)
}

/// Gauss–Jordan inverse with partial pivoting.
pub fn invert(a: &[f64], d: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; d * d];
    for i in 0..d {
        inv[i * d + i] = 1.0;
    }
    for col in 0..d {
        let pivot = (col..d).max_by(|&i, &j| m[i * d + col].abs().total_cmp(&m[j * d + col].abs())).unwrap();
        for k in 0..d {
            m.swap(col * d + k, pivot * d + k);
            inv.swap(col * d + k, pivot * d + k);
        }
        let p = m[col * d + col];
        for k in 0..d {
            m[col * d + k] /= p;
            inv[col * d + k] /= p;
        }
        for r in 0..d {
            if r != col {
                let f = m[r * d + col];
                for k in 0..d {
                    m[r * d + k] -= f * m[col * d + k];
                    inv[r * d + k] -= f * inv[col * d + k];
                }
            }
        }
    }
    inv
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(a: &[f64], d: usize) -> f64 {
    let mut m = a.to_vec();
    let mut det = 1.0;
    for col in 0..d {
        let pivot = (col..d).max_by(|&i, &j| m[i * d + col].abs().total_cmp(&m[j * d + col].abs())).unwrap();
        if pivot != col {
            for k in 0..d {
                m.swap(col * d + k, pivot * d + k);
            }
            det = -det;
        }
        let p = m[col * d + col];
        det *= p;
        for r in col + 1..d {
            let f = m[r * d + col] / p;
            for k in col..d {
                m[r * d + k] -= f * m[col * d + k];
            }
        }
    }
    det
}

/// Random symmetric positive-definite `A Aᵀ + d·I/10`.
pub fn random_spd(rng: &mut Rng, d: usize) -> Vec<f64> {
    let a = random_vec(rng, d * d);
    let mut s = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            s[i * d + j] = (0..d).map(|k| a[i * d + k] * a[j * d + k]).sum::<f64>();
        }
        s[i * d + i] += d as f64 / 10.0;
    }
    s
}

/// Samples with exactly the given mean and covariance: `μ ± sqrt(d)·L e_i`.
pub fn samples_with_moments(mean: &[f64], cov: &[f64]) -> Vec<Vec<f64>> {
    let d = mean.len();
    // Cholesky by hand, independent of the library's.
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let s: f64 = cov[i * d + j] - (0..j).map(|k| l[i * d + k] * l[j * d + k]).sum::<f64>();
            l[i * d + j] = if i == j { s.sqrt() } else { s / l[j * d + j] };
        }
    }
    let scale = (d as f64).sqrt();
    let mut out = Vec::new();
    for col in 0..d {
        for sign in [1.0, -1.0] {
            out.push((0..d).map(|r| mean[r] + sign * scale * l[r * d + col]).collect());
        }
    }
    out
}

/// `n` points in `d` dims with per-axis standard deviations falling from 3 to
/// 0.3, plus `planted` points shifted by 10σ along the last axis, which has the
/// smallest spread. Planted points are appended at the end.
pub fn planted_set(seed: u64, n: usize, d: usize, planted: usize) -> Vec<Vec<f64>> {
    use rand_distr::{Distribution, StandardNormal};
    let mut r = rng(seed);
    let sigma: Vec<f64> = (0..d).map(|i| 3.0 - 2.7 * i as f64 / (d - 1) as f64).collect();
    let mut out: Vec<Vec<f64>> = (0..n)
        .map(|_| sigma.iter().map(|s| s * Distribution::<f64>::sample(&StandardNormal, &mut r)).collect())
        .collect();
    for p in 0..planted {
        let mut v: Vec<f64> = sigma.iter().map(|s| s * Distribution::<f64>::sample(&StandardNormal, &mut r)).collect();
        let sign = if p % 2 == 0 { 1.0 } else { -1.0 };
        v[d - 1] += sign * 10.0 * sigma[d - 1];
        out.push(v);
    }
    out
}

/// Positions of `scores` sorted by decreasing value.
pub fn ranking(scores: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    idx
}

/// Checks input and parameter gradients of `layer` on `<layer(x), r>`.
pub fn check_layer<L: Layer<f64> + Clone>(layer: &L, input_shape: &[usize], seed: u64) -> f64 {
    let mut rng = rng(seed);
    let x = random_tensor(&mut rng, input_shape);
    let out_shape = layer.output_shape(input_shape).unwrap();
    let r = random_tensor(&mut rng, &out_shape);

    let mut trained = layer.clone();
    trained.zero_grad();
    trained.forward(&x).unwrap();
    let dx = trained.backward(&r).unwrap();

    let objective = |l: &L, input: &Tensor<f64>| l.infer(input).unwrap().dot(&r);

    let numeric_dx = numeric_gradient(x.data(), H, |probe| {
        objective(layer, &Tensor::new(input_shape.to_vec(), probe.to_vec()).unwrap())
    });
    let mut worst = max_relative_error(dx.data(), &numeric_dx, 1e-6);

    let analytic: Vec<Vec<f64>> = trained.grads().iter().map(|g| g.data().to_vec()).collect();
    for (p, grad) in analytic.iter().enumerate() {
        let base = layer.params()[p].data().to_vec();
        let numeric = numeric_gradient(&base, H, |probe| {
            let mut l = layer.clone();
            l.params_and_grads()[p].0.data_mut().copy_from_slice(probe);
            objective(&l, &x)
        });
        worst = worst.max(max_relative_error(grad, &numeric, 1e-6));
    }
    worst
}

/// `‖a − n‖ / ‖n‖`, for gradients of scalar objectives.
pub fn norm_relative_error(a: &[f64], n: &[f64]) -> f64 {
    let diff: f64 = a.iter().zip(n).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = n.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
    diff / scale
}
