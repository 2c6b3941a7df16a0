//! Confusion matrix, precision/recall/F1 with the outlier class as positive,
//! and report rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{DatasetSplit, EmbeddedDocument, Label, Partition};
use crate::error::{Error, Result};
use crate::pipeline::PipelineModel;
use crate::scalar::Scalar;

/// Rows are the true class (normal, outlier); columns the predicted class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tp: usize,
}

impl ConfusionMatrix {
    pub fn new(tn: usize, fp: usize, fn_: usize, tp: usize) -> Self {
        ConfusionMatrix { tn, fp, fn_, tp }
    }

    pub fn total(&self) -> usize {
        self.tn + self.fp + self.fn_ + self.tp
    }

    pub fn as_rows(&self) -> [[usize; 2]; 2] {
        [[self.tn, self.fp], [self.fn_, self.tp]]
    }
}

pub fn confusion(labels: &[Label], predictions: &[Label]) -> Result<ConfusionMatrix> {
    if labels.len() != predictions.len() {
        return Err(Error::arg(format!(
            "{} labels but {} predictions",
            labels.len(),
            predictions.len()
        )));
    }
    if labels.is_empty() {
        return Err(Error::arg("cannot build a confusion matrix from zero samples"));
    }
    let mut cm = ConfusionMatrix::default();
    for (&l, &p) in labels.iter().zip(predictions) {
        match (l, p) {
            (Label::Normal, Label::Normal) => cm.tn += 1,
            (Label::Normal, Label::Outlier) => cm.fp += 1,
            (Label::Outlier, Label::Normal) => cm.fn_ += 1,
            (Label::Outlier, Label::Outlier) => cm.tp += 1,
        }
    }
    Ok(cm)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub confusion: ConfusionMatrix,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub n_samples: usize,
    /// No positive predictions, precision reported as 0.
    pub precision_degenerate: bool,
    /// No positive labels, recall reported as 0.
    pub recall_degenerate: bool,
}

pub fn metrics(cm: ConfusionMatrix) -> EvalReport {
    let ratio = |num: usize, den: usize| if den == 0 { (0.0, true) } else { (num as f64 / den as f64, false) };
    let (precision, precision_degenerate) = ratio(cm.tp, cm.tp + cm.fp);
    let (recall, recall_degenerate) = ratio(cm.tp, cm.tp + cm.fn_);
    let f1 = if precision + recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
    EvalReport { confusion: cm, precision, recall, f1, n_samples: cm.total(), precision_degenerate, recall_degenerate }
}

impl EvalReport {
    pub fn from_predictions(labels: &[Label], predictions: &[Label]) -> Result<Self> {
        Ok(metrics(confusion(labels, predictions)?))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Aligned text table: item, sample count, F1, precision, recall and the
    /// confusion matrix as `[[tn fp] [fn tp]]`.
    pub fn to_table(&self, item: &str) -> String {
        let cm = self.confusion;
        let row = [
            item.to_string(),
            self.n_samples.to_string(),
            format!("{:.8}", self.f1),
            format!("{:.8}", self.precision),
            format!("{:.8}", self.recall),
            format!("[[{} {}] [{} {}]]", cm.tn, cm.fp, cm.fn_, cm.tp),
        ];
        let head = ["Item", "Samples", "F1", "Precision", "Recall", "Confusion Matrix"];
        let widths: Vec<usize> = head.iter().zip(&row).map(|(h, r)| h.len().max(r.len())).collect();
        let mut out = String::new();
        for cells in [head.map(String::from), row] {
            let line: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            writeln!(out, "{}", line.join(" | ").trim_end()).unwrap();
        }
        out
    }
}

/// featurize → predict → confusion → metrics over one partition.
pub fn evaluate_pipeline<T: Scalar>(
    model: &PipelineModel<T>,
    split: &DatasetSplit,
    partition: Partition,
) -> Result<EvalReport> {
    evaluate_documents(model, split.get(partition))
}

pub fn evaluate_documents<T: Scalar>(model: &PipelineModel<T>, docs: &[EmbeddedDocument]) -> Result<EvalReport> {
    if docs.is_empty() {
        return Err(Error::arg("cannot evaluate an empty partition"));
    }
    let predictions = model.predict_batch(docs)?;
    let labels: Vec<Label> = docs.iter().map(|d| d.label).collect();
    let predicted: Vec<Label> = predictions.iter().map(|p| p.label).collect();
    EvalReport::from_predictions(&labels, &predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_confusion_matrix() {
        let r = metrics(ConfusionMatrix::new(2284, 82, 206, 918));
        assert_eq!(r.n_samples, 3490);
        assert!((r.precision - 0.918).abs() < 1e-6);
        assert!((r.recall - 0.816725979).abs() < 1e-6);
        assert!((r.f1 - 0.86440678).abs() < 1e-6);
    }

    #[test]
    fn perfect_and_degenerate() {
        let r = metrics(ConfusionMatrix::new(3, 0, 0, 3));
        assert_eq!((r.precision, r.recall, r.f1), (1.0, 1.0, 1.0));
        let r = metrics(ConfusionMatrix::new(5, 2, 3, 0));
        assert_eq!((r.precision, r.recall, r.f1), (0.0, 0.0, 0.0));
        assert!(!r.precision_degenerate && !r.recall_degenerate);
        let r = metrics(ConfusionMatrix::new(5, 0, 3, 0));
        assert!(r.precision_degenerate && !r.recall_degenerate);
        assert_eq!(r.recall, 0.0);
    }

    #[test]
    fn confusion_counts() {
        use Label::*;
        let labels = [Normal, Normal, Normal, Outlier, Outlier, Outlier];
        assert_eq!(confusion(&labels, &labels).unwrap(), ConfusionMatrix::new(3, 0, 0, 3));
        assert_eq!(confusion(&labels, &[Outlier; 6]).unwrap(), ConfusionMatrix::new(0, 3, 0, 3));
        assert!(confusion(&labels, &[Outlier; 5]).is_err());
        assert!(confusion(&[], &[]).is_err());
    }

    #[test]
    fn table_layout() {
        let t = metrics(ConfusionMatrix::new(2284, 82, 206, 918)).to_table("XNLI+SST");
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("Item     | Samples | F1"));
        assert!(lines[1].contains("| 3490    | 0.86440678 | 0.91800000 | 0.81672598 | [[2284 82] [206 918]]"));
    }
}
