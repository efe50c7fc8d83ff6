use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gcnlab_bench::bench_bundle;
use gcnlab_core::ndarray::Array2;
use gcnlab_core::{
    eigenvalues_symmetric, forward, init_params, local_reaching_centrality, loss_and_grads,
    row_normalize_features, Mode, SplitMix64,
};

fn bench_spmm(c: &mut Criterion) {
    let bundle = bench_bundle();
    let a_hat = bundle.graph.normalized_adjacency();
    let mut rng = SplitMix64::new(3);
    let x = Array2::from_shape_fn((bundle.num_nodes(), 16), |_| rng.next_f64());
    c.bench_function("spmm_1000x16", |b| {
        b.iter(|| a_hat.mul_dense(black_box(&x)).unwrap())
    });
}

fn bench_centrality(c: &mut Criterion) {
    let bundle = bench_bundle();
    c.bench_function("local_reaching_centrality_1000", |b| {
        b.iter(|| local_reaching_centrality(black_box(&bundle.graph)).unwrap())
    });
}

fn bench_spectrum(c: &mut Criterion) {
    let bundle = gcnlab_core::generate_sbm(&gcnlab_core::SbmConfig {
        num_nodes: 300,
        num_classes: 3,
        p_in: 0.05,
        p_out: 0.005,
        feature_dim: 8,
        feature_signal: 1.0,
        seed: 5,
    })
    .unwrap();
    let lap = bundle.graph.normalized_laplacian();
    c.bench_function("dense_spectrum_300", |b| {
        b.iter(|| eigenvalues_symmetric(black_box(&lap), false).unwrap())
    });
}

fn bench_train_epoch(c: &mut Criterion) {
    let bundle = bench_bundle();
    let a_hat = bundle.graph.normalized_adjacency();
    let x = row_normalize_features(&bundle.features);
    let params = init_params(x.ncols(), 16, bundle.num_classes(), 1).unwrap();
    let mask: Vec<bool> = (0..bundle.num_nodes()).map(|i| i % 10 == 0).collect();
    c.bench_function("forward_backward_1000", |b| {
        b.iter(|| {
            let act = forward(&a_hat, &x, &params, 0.5, Mode::Train, 9).unwrap();
            loss_and_grads(&act, &bundle.labels, &mask, &params, 5e-4, &a_hat, &x).unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_spmm,
    bench_centrality,
    bench_spectrum,
    bench_train_epoch
);
criterion_main!(benches);
