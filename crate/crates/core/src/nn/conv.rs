use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::Scalar;

use super::{glorot_uniform, Layer, Tensor};

/// `floor((input + 2·padding − kernel) / stride) + 1`, or `None` when the
/// kernel does not fit.
pub fn conv_output_dim(input: usize, kernel: usize, stride: usize, padding: usize) -> Option<usize> {
    if stride == 0 || kernel == 0 || input + 2 * padding < kernel {
        return None;
    }
    Some((input + 2 * padding - kernel) / stride + 1)
}

/// 2-D cross-correlation over a `(channels, height, width)` tensor with zero
/// padding.
#[derive(Debug, Clone)]
pub struct Conv2d<T> {
    pub in_channels: usize,
    pub out_channels: usize,
    pub kernel_h: usize,
    pub kernel_w: usize,
    pub stride: usize,
    pub padding: usize,
    /// `(out_channels, in_channels, kernel_h, kernel_w)`
    pub weight: Tensor<T>,
    /// `(out_channels)`
    pub bias: Tensor<T>,
    weight_grad: Tensor<T>,
    bias_grad: Tensor<T>,
    cached_input: Option<Tensor<T>>,
}

impl<T: Scalar> Conv2d<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        in_channels: usize,
        out_channels: usize,
        kernel_h: usize,
        kernel_w: usize,
        stride: usize,
        padding: usize,
        rng: &mut Rng,
    ) -> Result<Self> {
        let fan_in = in_channels * kernel_h * kernel_w;
        let fan_out = out_channels * kernel_h * kernel_w;
        let n = out_channels * fan_in;
        let weight = Tensor::new(
            vec![out_channels, in_channels, kernel_h, kernel_w],
            glorot_uniform(rng, n, fan_in, fan_out),
        )?;
        let bias = Tensor::new(vec![out_channels], vec![T::zero(); out_channels])?;
        Self::from_params(weight, bias, stride, padding)
    }

    pub fn from_params(weight: Tensor<T>, bias: Tensor<T>, stride: usize, padding: usize) -> Result<Self> {
        let &[out_channels, in_channels, kernel_h, kernel_w] = weight.shape() else {
            return Err(Error::shape(format!(
                "conv weight must be 4-d (out, in, kh, kw), got {:?}",
                weight.shape()
            )));
        };
        if bias.shape() != [out_channels] {
            return Err(Error::shape(format!(
                "conv bias must have shape [{out_channels}], got {:?}",
                bias.shape()
            )));
        }
        if stride == 0 {
            return Err(Error::arg("conv stride must be positive"));
        }
        Ok(Conv2d {
            in_channels,
            out_channels,
            kernel_h,
            kernel_w,
            stride,
            padding,
            weight_grad: Tensor::zeros(weight.shape()),
            bias_grad: Tensor::zeros(bias.shape()),
            weight,
            bias,
            cached_input: None,
        })
    }

    fn dims(&self, input_shape: &[usize]) -> Result<(usize, usize, usize, usize)> {
        let &[c, h, w] = input_shape else {
            return Err(Error::shape(format!(
                "conv input must be (channels, height, width), got {input_shape:?}"
            )));
        };
        if c != self.in_channels {
            return Err(Error::shape(format!(
                "conv expects {} input channels, got {c}",
                self.in_channels
            )));
        }
        let oh = conv_output_dim(h, self.kernel_h, self.stride, self.padding);
        let ow = conv_output_dim(w, self.kernel_w, self.stride, self.padding);
        match (oh, ow) {
            (Some(oh), Some(ow)) => Ok((h, w, oh, ow)),
            _ => Err(Error::shape(format!(
                "kernel {}x{} (stride {}, padding {}) does not fit input {h}x{w}",
                self.kernel_h, self.kernel_w, self.stride, self.padding
            ))),
        }
    }

    pub fn weight_grad(&self) -> &Tensor<T> {
        &self.weight_grad
    }

    pub fn bias_grad(&self) -> &Tensor<T> {
        &self.bias_grad
    }

    /// Output coordinates `o < out` whose input coordinate `o·stride + k − padding`
    /// falls inside `0..extent`.
    #[inline]
    fn valid(&self, k: usize, extent: usize, out: usize) -> std::ops::Range<usize> {
        let lo = self.padding.saturating_sub(k).div_ceil(self.stride);
        let Some(last) = (extent + self.padding).checked_sub(k + 1) else { return 0..0 };
        let hi = (last / self.stride + 1).min(out);
        if lo < hi { lo..hi } else { 0..0 }
    }
}

impl<T: Scalar> Layer<T> for Conv2d<T> {
    fn infer(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        let (h, w, oh, ow) = self.dims(input.shape())?;
        input.check_finite("conv input")?;
        let x = input.data();
        let wt = self.weight.data();
        let mut out = vec![T::zero(); self.out_channels * oh * ow];
        for o in 0..self.out_channels {
            let plane = &mut out[o * oh * ow..(o + 1) * oh * ow];
            plane.iter_mut().for_each(|v| *v = self.bias.data()[o]);
            for c in 0..self.in_channels {
                let xin = &x[c * h * w..(c + 1) * h * w];
                for kh in 0..self.kernel_h {
                    for kw in 0..self.kernel_w {
                        let k = wt[((o * self.in_channels + c) * self.kernel_h + kh) * self.kernel_w + kw];
                        let cols = self.valid(kw, w, ow);
                        if cols.is_empty() {
                            continue;
                        }
                        for oy in self.valid(kh, h, oh) {
                            let iy = oy * self.stride + kh - self.padding;
                            let row = &xin[iy * w..(iy + 1) * w];
                            let orow = &mut plane[oy * ow..(oy + 1) * ow];
                            let xs = row[cols.start * self.stride + kw - self.padding..].iter().step_by(self.stride);
                            for (acc, &xv) in orow[cols.clone()].iter_mut().zip(xs) {
                                *acc += k * xv;
                            }
                        }
                    }
                }
            }
        }
        Tensor::new(vec![self.out_channels, oh, ow], out)
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
            .ok_or_else(|| Error::State("conv backward called before forward".into()))?;
        let (h, w, oh, ow) = self.dims(input.shape())?;
        if upstream.shape() != [self.out_channels, oh, ow] {
            return Err(Error::shape(format!(
                "conv upstream gradient must be {:?}, got {:?}",
                [self.out_channels, oh, ow],
                upstream.shape()
            )));
        }
        upstream.check_finite("conv upstream gradient")?;
        let x = input.data();
        let up = upstream.data();
        let wt = self.weight.data();
        let mut dx = vec![T::zero(); x.len()];
        let (cin, kh_n, kw_n) = (self.in_channels, self.kernel_h, self.kernel_w);
        for o in 0..self.out_channels {
            let uplane = &up[o * oh * ow..(o + 1) * oh * ow];
            self.bias_grad.data_mut()[o] += uplane.iter().copied().sum();
            for c in 0..cin {
                let base = c * h * w;
                for kh in 0..kh_n {
                    for kw in 0..kw_n {
                        let widx = ((o * cin + c) * kh_n + kh) * kw_n + kw;
                        let k = wt[widx];
                        let mut gw = T::zero();
                        let cols = self.valid(kw, w, ow);
                        if cols.is_empty() {
                            continue;
                        }
                        for oy in self.valid(kh, h, oh) {
                            let iy = oy * self.stride + kh - self.padding;
                            let start = base + iy * w + cols.start * self.stride + kw - self.padding;
                            let urow = &uplane[oy * ow + cols.start..oy * ow + cols.end];
                            let xs = x[start..].iter().step_by(self.stride);
                            let dxs = dx[start..].iter_mut().step_by(self.stride);
                            for ((&g, &xv), d) in urow.iter().zip(xs).zip(dxs) {
                                gw += g * xv;
                                *d += g * k;
                            }
                        }
                        self.weight_grad.data_mut()[widx] += gw;
                    }
                }
            }
        }
        Tensor::new(input.shape().to_vec(), dx)
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
        let (_, _, oh, ow) = self.dims(input_shape)?;
        Ok(vec![self.out_channels, oh, ow])
    }
}
