//! Similarity scores between predicted and observed signal matrices.

pub mod connectivity;
pub mod rdm;
pub mod scores;
pub mod spatiotemporal;

pub use connectivity::{functional_connectivity, window_starts, ConnectivityMatrix};
pub use rdm::{compute_rdm, compute_rdm_with, rsa_pearson, rsa_score, Distance, Rdm};
pub use scores::{cka, mse, pearson_score, ColumnCorrelation};
pub use spatiotemporal::{st_correlation, StCorrelationMap};
