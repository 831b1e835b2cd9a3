use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gaplab::bounds::TolerancePolicy;
use gaplab::parallel::Execution;
use gaplab::sweep::{run_sweep, verify_batch, Case, Lengths, SweepConfig};
use gaplab::{PotentialSpec, StepPiece};

fn random_cases(n: usize, seed: u64) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let length = 10f64.powf(rng.gen_range(0.0..1.3));
            let mut left = -0.5 * length;
            let pieces = (0..rng.gen_range(1..4))
                .map(|_| {
                    left += rng.gen_range(0.05..0.3) * length;
                    let width = rng.gen_range(0.02..0.2) * length;
                    let piece = StepPiece {
                        height: rng.gen_range(0.0..3.0),
                        support: [left, left + width],
                    };
                    left += width;
                    piece
                })
                .collect();
            Case::new(PotentialSpec::MultiStep { pieces }, length)
        })
        .collect()
}

fn bench_verify_batch(c: &mut Criterion) {
    let cases = random_cases(16, 7);
    let policy = TolerancePolicy::default();
    let mut group = c.benchmark_group("verify_batch");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::new(name, cases.len()), &cases, |b, cases| {
            b.iter(|| verify_batch(cases, &policy, exec))
        });
    }
    group.finish();
}

fn bench_step_sweep(c: &mut Criterion) {
    let config = SweepConfig {
        potential: PotentialSpec::step(1.0, -0.5, 0.5),
        lengths: Lengths::LogSpaced {
            min: 5.0,
            max: 40.0,
            count: 8,
        },
        cells_per_length: 64.0,
        min_cells: 256,
        levels: 3,
        output: None,
        plot_script: None,
    };
    let mut group = c.benchmark_group("step_sweep");
    group.sample_size(10);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_function(name, |b| b.iter(|| run_sweep(&config, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_verify_batch, bench_step_sweep);
criterion_main!(benches);
