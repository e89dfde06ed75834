use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use majorana::geomeasure::{geometric_measure, GeometricOptions};
use majorana::marginals::{rdm_full, reconstruct_from_two_marginals, ReconstructOptions};
use majorana::slocc::classify_batch;
use majorana::{expand_to_full, SymmetricState};

fn modes() -> [(&'static str, bool); 2] {
    [("sequential", false), ("parallel", true)]
}

fn bench_classify(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let states: Vec<SymmetricState> = (0..512).map(|_| SymmetricState::random(10, &mut rng).unwrap()).collect();
    let mut group = c.benchmark_group("classify_batch_512");
    for (name, parallel) in modes() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &parallel, |b, &p| {
            b.iter(|| classify_batch(&states, 1e-6, p))
        });
    }
    group.finish();
}

fn bench_geometric(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = SymmetricState::random(12, &mut rng).unwrap();
    let mut group = c.benchmark_group("geometric_measure_n12_grid128");
    for (name, parallel) in modes() {
        let opts = GeometricOptions {
            grid: 128,
            restarts: 16,
            parallel,
            ..GeometricOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| b.iter(|| geometric_measure(&s, o)));
    }
    group.finish();
}

fn bench_reconstruct(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let f = expand_to_full(&SymmetricState::random(8, &mut rng).unwrap()).unwrap();
    let a = rdm_full(&f, &(1..8).collect::<Vec<_>>()).unwrap();
    let b = rdm_full(&f, &(2..=8).collect::<Vec<_>>()).unwrap();
    let mut group = c.benchmark_group("reconstruct_n8");
    group.sample_size(10);
    for (name, parallel) in modes() {
        let opts = ReconstructOptions {
            parallel,
            ..ReconstructOptions::default()
        };
        group.bench_with_input(BenchmarkId::from_parameter(name), &opts, |bch, o| {
            bch.iter(|| reconstruct_from_two_marginals(&a, &b, o).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_classify, bench_geometric, bench_reconstruct);
criterion_main!(benches);
