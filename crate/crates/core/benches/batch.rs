use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diarep::classify::{classify_injective, classify_projective};
use diarep::fincat::Convention;
use diarep::generate;
use diarep::linalg::Field;
use diarep::par::{par_map, seq_map};
use diarep::rep::Representation;

fn family(seed: u64, size: usize) -> Vec<Representation> {
    let mut rng = generate::rng(seed);
    let mut reps = Vec::with_capacity(size);
    while reps.len() < size {
        let d = Arc::new(generate::strict_diagram(&mut rng, Field::Prime(3), 3).unwrap());
        for _ in 0..8 {
            reps.push(generate::representation(&mut rng, &d, 2).unwrap());
        }
    }
    reps.truncate(size);
    reps
}

fn classify_both(m: &Representation) -> bool {
    let p = classify_projective("bench", m, Convention::Comma).unwrap();
    let i = classify_injective("bench", m, Convention::Comma).unwrap();
    p.agreement && i.agreement
}

fn batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify_batch");
    group.sample_size(10);
    for size in [16, 64] {
        let reps = family(7, size);
        group.bench_with_input(BenchmarkId::new("parallel", size), &reps, |b, reps| b.iter(|| par_map(reps, classify_both)));
        group.bench_with_input(BenchmarkId::new("sequential", size), &reps, |b, reps| b.iter(|| seq_map(reps, classify_both)));
    }
    group.finish();
}

criterion_group!(benches, batch);
criterion_main!(benches);
