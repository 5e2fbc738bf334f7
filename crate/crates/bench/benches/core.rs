use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ellprim_bench::{edge_params, orders};
use ellprim_core::{cyclo_norm, factorize, theta_exact, FactorBudget, SUnitInstance};

fn bench_factorize(c: &mut Criterion) {
    let budget = FactorBudget::default();
    let mut group = c.benchmark_group("factorize");
    for (n, value) in [12u64, 30, 41, 60].into_iter().zip(orders(2, 1, &[12, 30, 41, 60])) {
        group.bench_with_input(BenchmarkId::new("N_n q=2 a=1", n), &value, |b, v| b.iter(|| factorize(v, &budget)));
    }
    group.finish();
}

fn bench_cyclo_norm(c: &mut Criterion) {
    let params = edge_params();
    let mut group = c.benchmark_group("cyclo_norm");
    for n in [40u64, 210, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| params.iter().map(|p| cyclo_norm(p, n).significant_bits()).sum::<u32>())
        });
    }
    group.finish();
}

fn bench_theta(c: &mut Criterion) {
    let mut group = c.benchmark_group("theta_exact");
    let cases: [(f64, Vec<u64>); 3] = [
        (1e6, vec![2, 3, 5, 7]),
        (1e9, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]),
        (1e12, vec![2, 3, 5, 7, 11, 13]),
    ];
    for (x, primes) in cases {
        let inst = SUnitInstance::new(x, primes.clone()).unwrap();
        let label = format!("x={x:e} k={}", primes.len());
        group.bench_with_input(BenchmarkId::from_parameter(label), &inst, |b, inst| b.iter(|| theta_exact(inst)));
    }
    group.finish();
}

criterion_group!(benches, bench_factorize, bench_cyclo_norm, bench_theta);
criterion_main!(benches);
