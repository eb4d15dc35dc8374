//! Layerwise ridge encoding of signals from embeddings with nested
//! cross-validation.

pub mod cv;
pub mod ridge;
pub mod types;

pub use cv::{
    cross_validated_predictions, fold_assignment, log_grid, nested_cv_encode, EncodingConfig, EncodingReport,
    FoldScore, LayerSummary,
};
pub use ridge::{fit_ridge, predict, RidgeFit};
pub use types::{EmbeddingTensor, SignalMatrix};
