use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use submeasure_core::algebra::Algebra;
use submeasure_core::budget::Budget;
use submeasure_core::construction::construct_submeasure_with;
use submeasure_core::fragmentation::Fragmentation;
use submeasure_core::par::Exec;
use submeasure_core::rational::ratio;
use submeasure_core::submeasure::{check_axioms_with, CheckMode, Submeasure};

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn linear_weights(atoms: u8) -> Submeasure {
    let total = i64::from(atoms) * (i64::from(atoms) + 1) / 2;
    let ws = (1..=i64::from(atoms)).map(|i| ratio(i, total)).collect();
    Submeasure::from_atom_weights(Algebra::finite(atoms).unwrap(), ws).unwrap()
}

fn axioms(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_axioms");
    for atoms in [10u8, 12] {
        let m = linear_weights(atoms);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, atoms), &m, |b, m| {
                b.iter(|| check_axioms_with(black_box(m), CheckMode::Exhaustive, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_submeasure");
    group.sample_size(10);
    for atoms in [10u8, 12] {
        let f = Fragmentation::from_submeasure_dyadic(&linear_weights(atoms)).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, atoms), &f, |b, f| {
                b.iter(|| {
                    construct_submeasure_with(black_box(f), &mut Budget::unlimited(), exec).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn grading(c: &mut Criterion) {
    let mut group = c.benchmark_group("check_graded");
    for atoms in [10u8, 12] {
        let f = Fragmentation::from_submeasure_harmonic(&linear_weights(atoms)).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, atoms), &f, |b, f| {
                b.iter(|| f.check_graded_with(black_box(1), exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, axioms, construction, grading);
criterion_main!(benches);
