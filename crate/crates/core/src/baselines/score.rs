use serde::{Deserialize, Serialize};

use crate::corpus::{EmbeddedDocument, Label};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{fit_gaussian, fit_pca, GaussianModel, PcaModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScorerKind {
    Mahalanobis,
    PcaRecon,
    AeRecon,
}

impl ScorerKind {
    pub fn name(self) -> &'static str {
        match self {
            ScorerKind::Mahalanobis => "mahalanobis",
            ScorerKind::PcaRecon => "pca_recon",
            ScorerKind::AeRecon => "ae_recon",
        }
    }
}

/// One document's anomaly score; higher is more anomalous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredItem {
    pub id: String,
    pub score: f64,
    pub scorer: ScorerKind,
}

/// How a document matrix becomes a single vector for the baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pooling {
    /// Mean of the non-padding sentence rows.
    #[default]
    Mean,
}

impl Pooling {
    pub fn pool<T: Scalar>(self, doc: &EmbeddedDocument) -> Vec<T> {
        match self {
            Pooling::Mean => doc.mean_pool().into_iter().map(T::of).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineConfig {
    pub epsilon: f64,
    pub pca_components: usize,
    /// Training-score percentile used as the decision threshold.
    pub percentile: f64,
    pub pooling: Pooling,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig { epsilon: 1e-6, pca_components: 10, percentile: 95.0, pooling: Pooling::Mean }
    }
}

/// A fitted baseline.
#[derive(Debug, Clone)]
pub enum Scorer<T> {
    Mahalanobis(GaussianModel<T>),
    Pca(PcaModel<T>),
}

impl<T: Scalar> Scorer<T> {
    pub fn kind(&self) -> ScorerKind {
        match self {
            Scorer::Mahalanobis(_) => ScorerKind::Mahalanobis,
            Scorer::Pca(_) => ScorerKind::PcaRecon,
        }
    }

    pub fn score(&self, x: &[T]) -> Result<T> {
        match self {
            Scorer::Mahalanobis(m) => m.mahalanobis_sq(x),
            Scorer::Pca(m) => m.recon_error(x),
        }
    }
}

/// Scores every document, preserving order.
pub fn score_corpus<T: Scalar>(scorer: &Scorer<T>, docs: &[EmbeddedDocument], pooling: Pooling) -> Result<Vec<ScoredItem>> {
    docs.iter()
        .map(|d| {
            let score = scorer.score(&pooling.pool::<T>(d))?.as_f64();
            if !score.is_finite() {
                return Err(Error::NonFinite(format!("score of {:?}", d.id)));
            }
            Ok(ScoredItem { id: d.id.clone(), score, scorer: scorer.kind() })
        })
        .collect()
}

/// A baseline scorer with its decision threshold: documents scoring strictly
/// above `threshold` are flagged as outliers.
#[derive(Debug, Clone)]
pub struct BaselineModel<T> {
    pub scorer: Scorer<T>,
    pub threshold: f64,
    pub pooling: Pooling,
}

impl<T: Scalar> BaselineModel<T> {
    pub fn score(&self, doc: &EmbeddedDocument) -> Result<f64> {
        Ok(self.scorer.score(&self.pooling.pool::<T>(doc))?.as_f64())
    }

    pub fn predict(&self, doc: &EmbeddedDocument) -> Result<Label> {
        Ok(if self.score(doc)? > self.threshold { Label::Outlier } else { Label::Normal })
    }
}

/// Fits a baseline on pooled `train` documents and sets the threshold at the
/// configured percentile of the training scores. PCA keeps
/// `min(pca_components, embed_dim)` components.
pub fn fit_baseline<T: Scalar>(
    kind: ScorerKind,
    train: &[EmbeddedDocument],
    config: &BaselineConfig,
) -> Result<BaselineModel<T>> {
    let vectors: Vec<Vec<T>> = train.iter().map(|d| config.pooling.pool::<T>(d)).collect();
    let scorer = match kind {
        ScorerKind::Mahalanobis => Scorer::Mahalanobis(fit_gaussian(&vectors, T::of(config.epsilon))?),
        ScorerKind::PcaRecon => {
            let dim = vectors.first().map_or(0, Vec::len);
            Scorer::Pca(fit_pca(&vectors, config.pca_components.min(dim))?)
        }
        ScorerKind::AeRecon => return Err(Error::arg("the autoencoder score is not a baseline")),
    };
    let scores = score_corpus(&scorer, train, config.pooling)?;
    let values: Vec<f64> = scores.iter().map(|s| s.score).collect();
    let threshold = percentile(&values, config.percentile)?;
    Ok(BaselineModel { scorer, threshold, pooling: config.pooling })
}

/// Linear-interpolation percentile (`q` in `[0, 100]`).
pub fn percentile(values: &[f64], q: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::arg("percentile of an empty set"));
    }
    if !(0.0..=100.0).contains(&q) {
        return Err(Error::arg(format!("percentile must be in [0, 100], got {q}")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Ok(sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64))
}
