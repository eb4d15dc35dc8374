//! Latent trajectory comparison: trajectories along time or depth, their
//! per-step dynamics and information measures, and DRA.

pub mod common;
pub mod dra;
pub mod dynamics;
pub mod entropy;
pub mod lyapunov;
pub mod mi;
pub mod pca;
pub mod profile;
pub mod trajectory;

pub use common::{to_common_space, CommonSpace};
pub use dra::{combine_terms, dra, dra_terms, dra_with_summaries, DraConfig, DraNormalization, DraReport, DraTerms};
pub use dynamics::{normalized_dynamics, step_dynamics, DynamicsScale, NormalizedDynamics, StepDynamics};
pub use entropy::{confidence_series, matrix_entropy};
pub use lyapunov::{lyapunov_exponent, LyapunovEstimate};
pub use mi::{default_bins, mutual_info, MiEstimate};
pub use pca::{pca_ensemble, pca_trajectory};
pub use profile::{align_profiles, compute_profile, AlignmentProfile, ProfileConfig, TrajectoryProfile};
pub use trajectory::{build_trajectory, Axis, BuiltTrajectory, Reduce, StateEnsemble, Trajectory, TrajectorySource};
