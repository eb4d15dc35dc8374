//! Dense matrices, descriptive statistics, eigendecomposition, Gaussian
//! divergence and step-weight schedules shared by every other module.

pub mod eigen;
pub mod gaussian;
pub mod matrix;
pub mod stats;
pub mod tensor;
pub mod weights;

pub use eigen::{principal_axes, symmetric_eigendecomposition, SymmetricEigenpairs};
pub use gaussian::{gaussian_kl, GaussianSummary};
pub use matrix::Matrix;
pub use stats::{moments, pearson, spearman, Moments};
pub use tensor::Tensor3;
pub use weights::{gamma_weights, WeightSchedule};
