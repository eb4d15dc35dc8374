//! Representational and latent-trajectory similarity between a multichannel
//! signal recording and a layerwise model-embedding tensor.
//!
//! * [`numcore`]: matrices, statistics, eigendecomposition, Gaussian KL, weights
//! * [`encoding`]: layerwise ridge encoding with nested cross-validation
//! * [`repsim`]: MSE, Pearson, RSA, CKA, spatiotemporal maps, connectivity
//! * [`ltc`]: latent trajectory comparison (dynamics, entropy, MI, Lyapunov, DRA)
//! * [`ingest`]: tensor files, dataset manifests, synthetic data
//! * [`cli`]: the `trajsim` command-line pipeline

pub mod cli;
pub mod encoding;
pub mod error;
pub mod ingest;
pub mod ltc;
pub mod numcore;
pub mod repsim;

pub use error::{Error, Result};
