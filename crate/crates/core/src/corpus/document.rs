use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ground-truth class. Outliers are the positive class everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Label {
    Normal,
    Outlier,
}

impl Label {
    pub fn as_u8(self) -> u8 {
        match self {
            Label::Normal => 0,
            Label::Outlier => 1,
        }
    }

    pub fn is_outlier(self) -> bool {
        self == Label::Outlier
    }
}

impl From<Label> for u8 {
    fn from(l: Label) -> u8 {
        l.as_u8()
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(v: u8) -> std::result::Result<Self, String> {
        match v {
            0 => Ok(Label::Normal),
            1 => Ok(Label::Outlier),
            other => Err(format!("label must be 0 or 1, got {other}")),
        }
    }
}

/// Where a raw document came from; decides its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    NormalCorpus,
    OutlierCorpus,
}

impl Source {
    pub fn label(self) -> Label {
        match self {
            Source::NormalCorpus => Label::Normal,
            Source::OutlierCorpus => Label::Outlier,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawDocument {
    pub id: String,
    pub text: String,
    pub source: Source,
}

/// One document as a fixed `max_sent × embed_dim` matrix of sentence
/// embeddings. Rows past the sentence count are zero; sentences beyond
/// `max_sent` are kept aside so the document can be written back unchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedDocument {
    pub id: String,
    pub label: Label,
    sentence_count: usize,
    max_sent: usize,
    embed_dim: usize,
    matrix: Vec<f64>,
    overflow: Vec<f64>,
}

impl EmbeddedDocument {
    /// Builds the padded/truncated matrix from the stored sentence vectors.
    pub fn new(id: impl Into<String>, label: Label, sentences: &[Vec<f64>], max_sent: usize) -> Result<Self> {
        let id = id.into();
        if max_sent == 0 {
            return Err(Error::arg("max_sent must be at least 1"));
        }
        let Some(first) = sentences.first() else {
            return Err(Error::arg(format!("document {id:?} has no sentences")));
        };
        let embed_dim = first.len();
        if embed_dim == 0 {
            return Err(Error::arg(format!("document {id:?} has zero-length sentence vectors")));
        }
        if let Some((i, s)) = sentences.iter().enumerate().find(|(_, s)| s.len() != embed_dim) {
            return Err(Error::shape(format!(
                "document {id:?}: sentence {i} has {} values, expected {embed_dim}",
                s.len()
            )));
        }
        if sentences.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("document {id:?} contains NaN or infinity")));
        }
        let kept = sentences.len().min(max_sent);
        let mut matrix = vec![0.0; max_sent * embed_dim];
        for (row, s) in matrix.chunks_exact_mut(embed_dim).zip(&sentences[..kept]) {
            row.copy_from_slice(s);
        }
        let overflow = sentences[kept..].iter().flatten().copied().collect();
        Ok(EmbeddedDocument {
            id,
            label,
            sentence_count: sentences.len(),
            max_sent,
            embed_dim,
            matrix,
            overflow,
        })
    }

    /// Number of sentences before truncation.
    pub fn sentence_count(&self) -> usize {
        self.sentence_count
    }

    /// Number of non-padding rows in the matrix.
    pub fn content_rows(&self) -> usize {
        self.sentence_count.min(self.max_sent)
    }

    pub fn max_sent(&self) -> usize {
        self.max_sent
    }

    pub fn embed_dim(&self) -> usize {
        self.embed_dim
    }

    /// Row-major `max_sent × embed_dim`.
    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.matrix[i * self.embed_dim..(i + 1) * self.embed_dim]
    }

    /// All stored sentence vectors, including the truncated ones.
    pub fn sentences(&self) -> impl Iterator<Item = &[f64]> {
        self.matrix
            .chunks_exact(self.embed_dim)
            .take(self.content_rows())
            .chain(self.overflow.chunks_exact(self.embed_dim))
    }

    /// Elementwise mask of the matrix, true on content rows.
    pub fn content_mask(&self) -> Vec<bool> {
        let content = self.content_rows() * self.embed_dim;
        (0..self.matrix.len()).map(|i| i < content).collect()
    }

    /// Mean of the content rows.
    pub fn mean_pool(&self) -> Vec<f64> {
        let rows = self.content_rows();
        let mut acc = vec![0.0; self.embed_dim];
        for r in 0..rows {
            acc.iter_mut().zip(self.row(r)).for_each(|(a, &x)| *a += x);
        }
        acc.iter_mut().for_each(|a| *a /= rows as f64);
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pads_with_zero_rows() {
        let s = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]];
        let d = EmbeddedDocument::new("a", Label::Normal, &s, 5).unwrap();
        assert_eq!(d.content_rows(), 3);
        assert_eq!(d.row(2), &[5.0, 6.0]);
        assert_eq!(d.row(3), &[0.0, 0.0]);
        assert_eq!(d.row(4), &[0.0, 0.0]);
    }

    #[test]
    fn truncates_but_keeps_overflow() {
        let s: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64]).collect();
        let d = EmbeddedDocument::new("a", Label::Outlier, &s, 5).unwrap();
        assert_eq!(d.matrix(), &[0.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!(d.sentence_count(), 7);
        assert_eq!(d.sentences().count(), 7);
        assert_eq!(d.mean_pool(), vec![2.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(EmbeddedDocument::new("a", Label::Normal, &[], 3).is_err());
        assert!(EmbeddedDocument::new("a", Label::Normal, &[vec![1.0], vec![1.0, 2.0]], 3).is_err());
        assert!(EmbeddedDocument::new("a", Label::Normal, &[vec![f64::NAN]], 3).is_err());
    }

    #[test]
    fn label_serde_as_integer() {
        assert_eq!(serde_json::to_string(&Label::Outlier).unwrap(), "1");
        assert_eq!(serde_json::from_str::<Label>("0").unwrap(), Label::Normal);
        assert!(serde_json::from_str::<Label>("2").is_err());
    }
}
