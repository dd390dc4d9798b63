use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use tricolor::gen::Family;
use tricolor::homsolver::hom_solve;
use tricolor::{solve, SolverConfig};
use tricolor_bench::{family, hom_fixtures, modes_for};

fn coloring(c: &mut Criterion) {
    let sets = [
        (Family::UniversalApex, 100),
        (Family::UniversalApex, 300),
        (Family::RandomDiam2, 20),
        (Family::RandomDiam3, 30),
        (Family::Petersen, 10),
    ];
    for (fam, n) in sets {
        let fixtures = family(fam, n, 3);
        let mut group = c.benchmark_group(format!("solve/{fam}/n={n}"));
        for mode in modes_for(&fixtures[0].instance) {
            let cfg = SolverConfig::with_mode(mode);
            group.bench_function(BenchmarkId::from_parameter(mode), |b| {
                b.iter(|| {
                    for f in &fixtures {
                        black_box(solve(&f.instance, &cfg).expect("applicable mode"));
                    }
                })
            });
        }
        group.finish();
    }
}

fn homomorphism(c: &mut Criterion) {
    let mut group = c.benchmark_group("hom");
    let cfg = SolverConfig::default();
    for (label, inst) in hom_fixtures() {
        group.bench_function(label, |b| {
            b.iter(|| black_box(hom_solve(&inst, &cfg).expect("valid target")))
        });
    }
    group.finish();
}

criterion_group!(benches, coloring, homomorphism);
criterion_main!(benches);
