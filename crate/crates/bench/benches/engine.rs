use algcohom::cochain::DEFAULT_CAP;
use algcohom::homology::{cohomology, total_complex, Comparison};
use algcohom::lie::lie_cohomology;
use algcohom::linalg::rank;
use algcohom_bench::{assoc_workloads, fields, lie_workloads, low_rank_matrix};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn total_cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("total_cohomology");
    g.sample_size(10);
    for field in fields() {
        for (name, t) in assoc_workloads(field).unwrap() {
            g.bench_function(BenchmarkId::new(name, field), |b| {
                b.iter(|| cohomology(&total_complex(black_box(&t), 4, DEFAULT_CAP).unwrap()))
            });
        }
    }
    g.finish();
}

fn comparison(c: &mut Criterion) {
    let mut g = c.benchmark_group("comparison");
    g.sample_size(10);
    for (name, t) in assoc_workloads(fields()[0]).unwrap() {
        g.bench_function(name, |b| b.iter(|| Comparison::new(black_box(&t), 4, DEFAULT_CAP).unwrap().verdict()));
    }
    g.finish();
}

fn lie(c: &mut Criterion) {
    let mut g = c.benchmark_group("lie_cohomology");
    g.sample_size(10);
    for (name, t) in lie_workloads(fields()[0]).unwrap() {
        g.bench_function(name, |b| b.iter(|| lie_cohomology(black_box(&t), 4, DEFAULT_CAP).unwrap()));
    }
    g.finish();
}

fn sparse_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("sparse_rank");
    g.sample_size(10);
    for field in fields() {
        let sizes: &[usize] = if field.characteristic() == 0 { &[40, 80, 120] } else { &[40, 80, 160] };
        for &n in sizes {
            let m = low_rank_matrix(field, n, n / 2, n as u64).unwrap();
            g.bench_function(BenchmarkId::new(field.to_string(), n), |b| b.iter(|| rank(black_box(&m))));
        }
    }
    g.finish();
}

criterion_group!(benches, total_cohomology, comparison, lie, sparse_rank);
criterion_main!(benches);
