//! Compares the rayon-backed entry points against their sequential
//! reference implementations. Run with `cargo bench -p osr-eval`.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use osr_eval::catalog::ClassCatalog;
use osr_eval::matrix::{build_general_matrix, build_general_matrix_sequential};
use osr_eval::record::{validate_records, OpenPrediction, PredictionRecord, ValidatedRecords};
use osr_eval::seeding::SeedStream;
use osr_eval::simulate::{
    random_baseline_study, random_baseline_study_sequential, RandomPredictorMode,
};

fn synthetic_records(n: usize) -> ValidatedRecords {
    let catalog = ClassCatalog::new(["a", "b", "c", "d"], ["u0", "u1"]).unwrap();
    let truths = ["a", "b", "c", "d", "u0", "u1"];
    let preds = ["a", "b", "c", "d"];
    let mut rng = SeedStream::new(12345);
    let records: Vec<PredictionRecord> = (0..n)
        .map(|_| {
            let truth = truths[rng.next_bounded(6) as usize];
            let open = if rng.next_bool(0.2) {
                OpenPrediction::Unknown
            } else {
                OpenPrediction::known(preds[rng.next_bounded(4) as usize])
            };
            PredictionRecord::new(truth, open)
        })
        .collect();
    validate_records(&records, &catalog).unwrap()
}

fn bench_general_matrix(c: &mut Criterion) {
    let mut group = c.benchmark_group("general_matrix");
    for n in [100_000usize, 1_000_000] {
        let records = synthetic_records(n);
        group.bench_with_input(BenchmarkId::new("sequential", n), &records, |b, records| {
            b.iter(|| black_box(build_general_matrix_sequential(records)))
        });
        group.bench_with_input(BenchmarkId::new("parallel", n), &records, |b, records| {
            b.iter(|| black_box(build_general_matrix(records)))
        });
    }
    group.finish();
}

fn bench_baseline_study(c: &mut Criterion) {
    let grid = [(2u32, 2u32), (2, 10), (2, 100), (2, 1000)];
    let mut group = c.benchmark_group("baseline_study");
    group.sample_size(10);
    group.bench_function("sequential", |b| {
        b.iter(|| {
            black_box(random_baseline_study_sequential(
                &grid,
                20,
                200,
                RandomPredictorMode::DefaultHalf,
                7,
            ))
        })
    });
    group.bench_function("parallel", |b| {
        b.iter(|| {
            black_box(random_baseline_study(
                &grid,
                20,
                200,
                RandomPredictorMode::DefaultHalf,
                7,
            ))
        })
    });
    group.finish();
}

criterion_group!(benches, bench_general_matrix, bench_baseline_study);
criterion_main!(benches);
