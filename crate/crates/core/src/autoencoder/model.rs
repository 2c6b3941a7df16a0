use rand::seq::SliceRandom;

use crate::corpus::EmbeddedDocument;
use crate::error::{Error, Result};
use crate::nn::{
    adam_step, masked_mse_loss, mse_loss, AdamState, Conv2d, Dense, Layer, LayerKind, Relu, Reshape, Tensor,
    Upsample2x,
};
use crate::rng::{stage_rng, Rng};
use crate::scalar::Scalar;

use super::AeConfig;

/// Latent code with the reconstruction error appended: the classifier input.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector<T> {
    pub doc_id: String,
    pub latent: Vec<T>,
    pub recon_error: T,
}

impl<T: Scalar> FeatureVector<T> {
    /// `latent ⊕ [recon_error]`.
    pub fn to_vec(&self) -> Vec<T> {
        let mut v = self.latent.clone();
        v.push(self.recon_error);
        v
    }

    pub fn len(&self) -> usize {
        self.latent.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone)]
pub struct AutoencoderModel<T> {
    pub config: AeConfig,
    encoder: Vec<LayerKind<T>>,
    decoder: Vec<LayerKind<T>>,
    /// Mean reconstruction loss of every completed epoch.
    pub training_log: Vec<f64>,
}

impl<T: Scalar> AutoencoderModel<T> {
    /// Freshly initialised (untrained) model; weights drawn from `config.seed`.
    pub fn new(config: AeConfig) -> Result<Self> {
        let shapes = config.encoder_shapes()?;
        let mut rng = stage_rng(config.seed, "init");
        let (encoder, decoder) = build_layers(&config, &shapes, &mut rng)?;
        Ok(AutoencoderModel { config, encoder, decoder, training_log: Vec::new() })
    }

    pub fn is_trained(&self) -> bool {
        !self.training_log.is_empty()
    }

    pub fn input_shape(&self) -> [usize; 3] {
        [1, self.config.max_sent, self.config.embed_dim]
    }

    pub fn encoder(&self) -> &[LayerKind<T>] {
        &self.encoder
    }

    pub fn decoder(&self) -> &[LayerKind<T>] {
        &self.decoder
    }

    /// `(name, tensor)` for every learned parameter, encoder first.
    pub fn named_params(&self) -> Vec<(String, &Tensor<T>)> {
        let mut out = Vec::new();
        for (part, layers) in [("encoder", &self.encoder), ("decoder", &self.decoder)] {
            for (i, layer) in layers.iter().enumerate() {
                for (name, p) in layer.param_names().iter().zip(layer.params()) {
                    out.push((format!("{part}.{i}.{name}"), p));
                }
            }
        }
        out
    }

    /// Mutable view aligned with [`named_params`](Self::named_params).
    pub fn named_params_mut(&mut self) -> Vec<(String, &mut Tensor<T>)> {
        let mut out = Vec::new();
        for (part, layers) in [("encoder", &mut self.encoder), ("decoder", &mut self.decoder)] {
            for (i, layer) in layers.iter_mut().enumerate() {
                let names = layer.param_names();
                for (name, (p, _)) in names.iter().zip(layer.params_and_grads()) {
                    out.push((format!("{part}.{i}.{name}"), p));
                }
            }
        }
        out
    }

    pub fn parameter_count(&self) -> usize {
        self.named_params().iter().map(|(_, p)| p.len()).sum()
    }

    pub fn doc_tensor(&self, doc: &EmbeddedDocument) -> Result<Tensor<T>> {
        let [_, h, w] = self.input_shape();
        if doc.max_sent() != h || doc.embed_dim() != w {
            return Err(Error::shape(format!(
                "document {:?} is {}x{}, model expects {h}x{w}",
                doc.id,
                doc.max_sent(),
                doc.embed_dim()
            )));
        }
        Tensor::from_f64(vec![1, h, w], doc.matrix())
    }

    pub fn encode_tensor(&self, input: &Tensor<T>) -> Result<Tensor<T>> {
        self.check_input(input)?;
        self.encoder.iter().try_fold(input.clone(), |x, l| l.infer(&x))
    }

    pub fn decode_tensor(&self, latent: &Tensor<T>) -> Result<Tensor<T>> {
        self.decoder.iter().try_fold(latent.clone(), |x, l| l.infer(&x))
    }

    /// The `latent_dim` context vector of a document.
    pub fn encode(&self, doc: &EmbeddedDocument) -> Result<Vec<T>> {
        Ok(self.encode_tensor(&self.doc_tensor(doc)?)?.into_data())
    }

    /// Reconstruction of the document matrix and its reconstruction error.
    pub fn reconstruct(&self, doc: &EmbeddedDocument) -> Result<(Tensor<T>, T)> {
        let x = self.doc_tensor(doc)?;
        let (_, recon, err) = self.run(&x, &doc.content_mask())?;
        Ok((recon, err))
    }

    pub fn featurize(&self, doc: &EmbeddedDocument) -> Result<FeatureVector<T>> {
        let x = self.doc_tensor(doc)?;
        let (latent, _, recon_error) = self.run(&x, &doc.content_mask())?;
        Ok(FeatureVector { doc_id: doc.id.clone(), latent: latent.into_data(), recon_error })
    }

    /// Featurizes documents in order, splitting the work across threads.
    pub fn featurize_batch(&self, docs: &[EmbeddedDocument]) -> Result<Vec<FeatureVector<T>>> {
        let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(docs.len().max(1));
        let chunk = docs.len().div_ceil(workers).max(1);
        std::thread::scope(|s| {
            let handles: Vec<_> = docs
                .chunks(chunk)
                .map(|part| s.spawn(move || part.iter().map(|d| self.featurize(d)).collect::<Result<Vec<_>>>()))
                .collect();
            let mut out = Vec::with_capacity(docs.len());
            for h in handles {
                out.extend(h.join().expect("featurize worker panicked")?);
            }
            Ok(out)
        })
    }

    fn check_input(&self, input: &Tensor<T>) -> Result<()> {
        if input.shape() != self.input_shape() {
            return Err(Error::shape(format!(
                "autoencoder expects input {:?}, got {:?}",
                self.input_shape(),
                input.shape()
            )));
        }
        Ok(())
    }

    fn loss(&self, recon: &Tensor<T>, target: &Tensor<T>, mask: &[bool]) -> Result<(T, Tensor<T>)> {
        if self.config.masked_loss {
            masked_mse_loss(recon, target, mask)
        } else {
            mse_loss(recon, target)
        }
    }

    fn run(&self, x: &Tensor<T>, mask: &[bool]) -> Result<(Tensor<T>, Tensor<T>, T)> {
        let latent = self.encode_tensor(x)?;
        let recon = self.decode_tensor(&latent)?;
        let (err, _) = self.loss(&recon, x, mask)?;
        Ok((latent, recon, err))
    }

    fn layers_mut(&mut self) -> impl Iterator<Item = &mut LayerKind<T>> {
        self.encoder.iter_mut().chain(self.decoder.iter_mut())
    }

    /// Forward + backward on one input; gradients accumulate into the layers.
    fn accumulate(&mut self, x: &Tensor<T>, mask: &[bool]) -> Result<T> {
        let mut h = x.clone();
        for layer in self.layers_mut() {
            h = layer.forward(&h)?;
        }
        let (loss, mut grad) = self.loss(&h, x, mask)?;
        for layer in self.encoder.iter_mut().chain(self.decoder.iter_mut()).rev() {
            grad = layer.backward(&grad)?;
        }
        Ok(loss)
    }

    /// Trains in place for `config.epochs` more epochs.
    pub fn fit(&mut self, docs: &[EmbeddedDocument]) -> Result<()> {
        if docs.is_empty() {
            return Err(Error::arg("cannot train an autoencoder on zero documents"));
        }
        self.config.validate()?;
        let inputs = docs.iter().map(|d| self.doc_tensor(d)).collect::<Result<Vec<_>>>()?;
        let masks: Vec<Vec<bool>> = docs.iter().map(|d| d.content_mask()).collect();
        let mut rng = stage_rng(self.config.seed, "shuffle");
        let mut adam = AdamState::new(self.config.optimizer);
        let mut order: Vec<usize> = (0..docs.len()).collect();
        let first_epoch = self.training_log.len();

        for epoch in first_epoch..first_epoch + self.config.epochs {
            order.shuffle(&mut rng);
            let mut total = 0.0;
            for batch in order.chunks(self.config.batch_size) {
                self.layers_mut().for_each(|l| l.zero_grad());
                for &i in batch {
                    let loss = self.accumulate(&inputs[i], &masks[i]).map_err(|e| at_epoch(e, epoch))?;
                    total += loss.as_f64();
                }
                let inv = T::one() / T::of_usize(batch.len());
                let mut pairs: Vec<_> = self.layers_mut().flat_map(|l| l.params_and_grads()).collect();
                pairs.iter_mut().for_each(|(_, g)| g.scale(inv));
                adam_step(&mut pairs, &mut adam).map_err(|e| at_epoch(e, epoch))?;
            }
            let mean = total / docs.len() as f64;
            if !mean.is_finite() {
                return Err(Error::Training(format!("non-finite reconstruction loss in epoch {epoch}")));
            }
            log::debug!("autoencoder epoch {epoch}: mean loss {mean:.6e}");
            self.training_log.push(mean);
        }
        Ok(())
    }
}

fn at_epoch(e: Error, epoch: usize) -> Error {
    match e {
        Error::Training(m) | Error::NonFinite(m) => Error::Training(format!("epoch {epoch}: {m}")),
        other => other,
    }
}

/// Builds and trains a model on `docs`.
pub fn train_autoencoder<T: Scalar>(docs: &[EmbeddedDocument], config: &AeConfig) -> Result<AutoencoderModel<T>> {
    if docs.is_empty() {
        return Err(Error::arg("cannot train an autoencoder on zero documents"));
    }
    let mut model = AutoencoderModel::new(config.clone())?;
    model.fit(docs)?;
    Ok(model)
}

type LayerStack<T> = (Vec<LayerKind<T>>, Vec<LayerKind<T>>);

fn build_layers<T: Scalar>(config: &AeConfig, shapes: &[[usize; 3]], rng: &mut Rng) -> Result<LayerStack<T>> {
    let mut encoder = Vec::new();
    for (spec, &[c, _, _]) in config.channels.iter().zip(shapes) {
        encoder.push(LayerKind::Conv2d(Conv2d::new(
            c,
            spec.out_channels,
            spec.kernel,
            spec.kernel,
            spec.stride,
            spec.padding,
            rng,
        )?));
        encoder.push(LayerKind::Relu(Relu::new()));
    }
    let bottom = *shapes.last().expect("at least one conv");
    let flat: usize = bottom.iter().product();
    encoder.push(LayerKind::Reshape(Reshape::new(vec![flat])));
    encoder.push(LayerKind::Dense(Dense::new(flat, config.latent_dim, rng)?));

    let mut decoder = vec![
        LayerKind::Dense(Dense::new(config.latent_dim, flat, rng)?),
        LayerKind::Reshape(Reshape::new(bottom.to_vec())),
    ];
    for (i, spec) in config.channels.iter().enumerate().rev() {
        let [_, h, w] = shapes[i];
        if spec.stride == 2 {
            decoder.push(LayerKind::Upsample2x(Upsample2x::to_size(h, w)));
        }
        let out_channels = if i == 0 { spec.out_channels } else { config.channels[i - 1].out_channels };
        decoder.push(LayerKind::Conv2d(Conv2d::new(
            spec.out_channels,
            out_channels,
            spec.kernel,
            spec.kernel,
            1,
            spec.kernel / 2,
            rng,
        )?));
        decoder.push(LayerKind::Relu(Relu::new()));
    }
    let last = config.channels[0];
    decoder.push(LayerKind::Conv2d(Conv2d::new(last.out_channels, 1, last.kernel, last.kernel, 1, last.kernel / 2, rng)?));
    Ok((encoder, decoder))
}
