//! The full detector: split → autoencoder → features → oversampling →
//! logistic regression, plus prediction and checkpointing.

use crate::autoencoder::{train_autoencoder, AutoencoderModel, FeatureVector};
use crate::checkpoint::Checkpoint;
use crate::classifier::{train_logreg, LogisticModel, Standardizer, TrainingSummary};
use crate::config::RunConfig;
use crate::corpus::{oversample, stratified_split, DatasetSplit, EmbeddedDocument, Label};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
pub struct PipelineModel<T> {
    pub run: RunConfig,
    pub autoencoder: AutoencoderModel<T>,
    pub classifier: LogisticModel<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction<T> {
    pub features: FeatureVector<T>,
    pub probability: T,
    pub label: Label,
}

/// Splits `docs` per the run config and trains on the train partition.
pub fn train_pipeline<T: Scalar>(docs: &[EmbeddedDocument], run: &RunConfig) -> Result<(PipelineModel<T>, DatasetSplit)> {
    let run = run.clone().resolve()?;
    let split = split_for(docs, &run)?;
    let model = train_on(&split.train, run)?;
    Ok((model, split))
}

/// The deterministic split a run config implies.
pub fn split_for(docs: &[EmbeddedDocument], run: &RunConfig) -> Result<DatasetSplit> {
    stratified_split(docs, run.split, run.stage_seed("split"))
}

/// Trains every stage on `train` (no splitting).
pub fn train_on<T: Scalar>(train: &[EmbeddedDocument], run: RunConfig) -> Result<PipelineModel<T>> {
    let run = run.resolve()?;
    if train.is_empty() {
        return Err(Error::arg("training partition is empty"));
    }
    let autoencoder = train_autoencoder::<T>(train, &run.autoencoder)?;
    let features = autoencoder.featurize_batch(train)?;
    let labelled: Vec<(FeatureVector<T>, Label)> = features.into_iter().zip(train.iter().map(|d| d.label)).collect();
    let balanced = oversample(&labelled, run.stage_seed("oversample"))?;
    let classifier = train_logreg(&balanced, &run.classifier)?;
    Ok(PipelineModel { run, autoencoder, classifier })
}

impl<T: Scalar> PipelineModel<T> {
    pub fn ensure_trained(&self) -> Result<()> {
        if !self.autoencoder.is_trained() {
            return Err(Error::State("autoencoder has not been trained".into()));
        }
        if self.classifier.dim() != self.autoencoder.config.latent_dim + 1 {
            return Err(Error::State(format!(
                "classifier expects {} features but the autoencoder produces {}",
                self.classifier.dim(),
                self.autoencoder.config.latent_dim + 1
            )));
        }
        Ok(())
    }

    pub fn predict(&self, doc: &EmbeddedDocument) -> Result<Prediction<T>> {
        self.ensure_trained()?;
        let features = self.autoencoder.featurize(doc)?;
        self.classify(features)
    }

    pub fn predict_batch(&self, docs: &[EmbeddedDocument]) -> Result<Vec<Prediction<T>>> {
        self.ensure_trained()?;
        self.autoencoder.featurize_batch(docs)?.into_iter().map(|f| self.classify(f)).collect()
    }

    fn classify(&self, features: FeatureVector<T>) -> Result<Prediction<T>> {
        let x = features.to_vec();
        let probability = self.classifier.predict_proba(&x)?;
        let label = self.classifier.predict(&x)?;
        Ok(Prediction { features, probability, label })
    }

    pub fn to_checkpoint(&self) -> Checkpoint {
        let mut c = Checkpoint::new();
        c.set_meta("run", &self.run);
        self.autoencoder.save_into(&mut c, "autoencoder");
        let clf = &self.classifier;
        c.set_meta("classifier.lambda", &clf.lambda);
        c.set_meta("classifier.threshold", &clf.threshold);
        c.set_meta("classifier.summary", &clf.summary);
        let d = clf.dim();
        let f64s = |v: &[T]| v.iter().map(|x| x.as_f64()).collect::<Vec<_>>();
        c.push_block("classifier.weights", &[d], f64s(&clf.weights));
        c.push_block("classifier.bias", &[1], vec![clf.bias.as_f64()]);
        c.push_block("classifier.standardizer.mean", &[d], f64s(&clf.standardizer.mean));
        c.push_block("classifier.standardizer.std", &[d], f64s(&clf.standardizer.std));
        c
    }

    pub fn from_checkpoint(c: &Checkpoint) -> Result<Self> {
        let run: RunConfig = c.meta("run")?;
        let autoencoder = AutoencoderModel::load_from(c, "autoencoder")?;
        let d = autoencoder.config.latent_dim + 1;
        let ts = |v: &[f64]| v.iter().map(|&x| T::of(x)).collect::<Vec<T>>();
        let summary: TrainingSummary = c.meta("classifier.summary")?;
        let classifier = LogisticModel {
            weights: ts(c.block_with_shape("classifier.weights", &[d])?),
            bias: T::of(c.block_with_shape("classifier.bias", &[1])?[0]),
            lambda: c.meta("classifier.lambda")?,
            threshold: c.meta("classifier.threshold")?,
            standardizer: Standardizer {
                mean: ts(c.block_with_shape("classifier.standardizer.mean", &[d])?),
                std: ts(c.block_with_shape("classifier.standardizer.std", &[d])?),
            },
            summary,
        };
        let model = PipelineModel { run, autoencoder, classifier };
        model.ensure_trained().map_err(|e| Error::Format(format!("checkpoint: {e}")))?;
        Ok(model)
    }

    pub fn to_checkpoint_text(&self) -> String {
        self.to_checkpoint().to_text()
    }

    pub fn from_checkpoint_text(text: &str) -> Result<Self> {
        Self::from_checkpoint(&Checkpoint::parse(text)?)
    }
}
