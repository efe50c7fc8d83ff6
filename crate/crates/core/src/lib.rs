//! Core library for budget-constrained label selection on graphs.
//!
//! Answers one experimental question: given a transductive two-layer GCN
//! and a fixed labeling budget, which nodes should be labeled? The crate
//! provides the sparse graph machinery (CSR storage, normalized
//! adjacency/Laplacian, spectra), local reaching centrality, the four
//! selection policies (default-random, most-central, least-central,
//! equal-combined), and a deterministic full-batch training loop.

pub use ndarray;

pub mod centrality;
pub mod data;
pub mod error;
pub mod graph;
pub mod model;
pub mod rng;
pub mod selection;
pub mod sparse;
pub mod spectral;
pub mod trainer;

pub use centrality::{
    bfs_distances, local_reaching_centrality, local_reaching_centrality_with, CentralityOptions,
    CentralityScores, DistanceVector, UNREACHABLE,
};
pub use data::{
    generate_sbm, load_dataset, row_normalize_features, save_dataset, DatasetBundle, SbmConfig,
};
pub use error::{Error, Result};
pub use graph::{ComponentLabeling, Graph};
pub use model::{
    adam_step, forward, init_params, loss_and_grads, row_softmax, Activations, AdamState,
    Gradients, Mode, ModelParams,
};
pub use rng::SplitMix64;
pub use selection::{
    budget_for_rate, make_split, select_train_nodes, select_train_nodes_with, Policy,
    SelectOptions, Split,
};
pub use sparse::SparseMatrix;
pub use spectral::{
    eigenvalues_symmetric, eigenvalues_symmetric_with_cap, spectrum_stats, SpectrumResult,
    SpectrumStats, DEFAULT_DENSE_CAP,
};
pub use trainer::{evaluate, train, EpochRecord, TrainConfig, TrainResult};
