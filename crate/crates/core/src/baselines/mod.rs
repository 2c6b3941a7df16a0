//! Classical scorers used as comparison points: squared Mahalanobis distance
//! under a fitted Gaussian, and PCA reconstruction error.

mod gaussian;
mod linalg;
mod pca;
mod score;

pub use gaussian::{fit_gaussian, GaussianModel};
pub use linalg::{cholesky, cholesky_solve_lower, covariance, jacobi_eigen, mean_vector, SymmetricEigen};
pub use pca::{fit_pca, PcaModel};
pub use score::{fit_baseline, percentile, score_corpus, BaselineConfig, BaselineModel, Pooling, ScoredItem, Scorer, ScorerKind};
