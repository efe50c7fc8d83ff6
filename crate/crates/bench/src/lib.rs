//! Benchmark fixtures shared by the criterion targets.

use gcnlab_core::{generate_sbm, DatasetBundle, SbmConfig};

/// Mid-sized SBM instance: ~1000 nodes, 4 communities.
pub fn bench_bundle() -> DatasetBundle {
    generate_sbm(&SbmConfig {
        num_nodes: 1000,
        num_classes: 4,
        p_in: 0.03,
        p_out: 0.002,
        feature_dim: 64,
        feature_signal: 1.0,
        seed: 17,
    })
    .expect("valid config")
}
