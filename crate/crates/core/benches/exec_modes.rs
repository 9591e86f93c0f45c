use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use osp_toda::exec::Execution;
use osp_toda::numerics::bessel::liouville_samples;
use osp_toda::numerics::Grid1D;
use osp_toda::osp::relations::jacobi;
use osp_toda::osp::{build_basis, structure_constants, AlgebraTable};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn brackets(c: &mut Criterion) {
    let mut g = c.benchmark_group("structure_constants");
    g.sample_size(10);
    for l in [2usize, 3] {
        let basis = build_basis(l).unwrap();
        for (name, exec) in MODES {
            g.bench_with_input(BenchmarkId::new(name, l), &basis, |b, basis| {
                b.iter(|| structure_constants(black_box(basis), exec).unwrap())
            });
        }
    }
    g.finish();
}

fn jacobi_identity(c: &mut Criterion) {
    let mut g = c.benchmark_group("jacobi");
    g.sample_size(10);
    let t = AlgebraTable::new(2).unwrap();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| jacobi(black_box(&t), exec)));
    }
    g.finish();
}

fn bessel_samples(c: &mut Criterion) {
    let mut g = c.benchmark_group("liouville_samples");
    let grid = Grid1D::new(-10.0, 2.0, 2401).unwrap();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| liouville_samples(1.0, black_box(1.0), &grid, exec)));
    }
    g.finish();
}

criterion_group!(benches, brackets, jacobi_identity, bessel_samples);
criterion_main!(benches);
