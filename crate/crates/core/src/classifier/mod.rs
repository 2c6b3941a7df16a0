//! L2-regularised logistic regression over standardised feature vectors.

mod logistic;
mod standardizer;

pub use logistic::{logistic_objective, sigmoid, train_logreg, LogisticModel, LogregConfig, TrainingSummary};
pub use standardizer::Standardizer;
