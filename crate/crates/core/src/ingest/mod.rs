//! Tensor files, dataset manifests, CSV import and the seeded synthetic
//! dataset generator.

pub mod csv_import;
pub mod manifest;
pub mod rng;
pub mod synth;
pub mod tensorfile;

pub use csv_import::read_csv_matrix;
pub use manifest::{load_manifest, ChannelCoordinate, Dataset, DatasetManifest, MANIFEST_FORMAT};
pub use synth::{synth_generate, GroundTruth, SynthConfig, SynthOutput};
pub use tensorfile::{read_tensor, write_tensor, Dtype, TensorData, TensorValues};
