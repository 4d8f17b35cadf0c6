use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use liftkit::codes::random::random_sparse_matrix;
use liftkit::codes::{distance, gen_cycle, gen_toric, Side};
use liftkit::decongestion::{cycle_basis, random_cubic_graph, CycleBasisOptions};
use liftkit::lifting::{general_lift, product_lift};
use liftkit::skeleton::{attach_qubit_handles, attach_z_handles, build_x, PairingPolicy};
use liftkit::zhomology::snf;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rank_f2(c: &mut Criterion) {
    let mut g = c.benchmark_group("rank_f2");
    for n in [64, 256, 1024] {
        let m = random_sparse_matrix(&mut ChaCha8Rng::seed_from_u64(1), n, n, 6);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| m.rank()));
    }
    g.finish();
}

fn smith(c: &mut Criterion) {
    let mut g = c.benchmark_group("snf");
    for l in [4, 8, 12] {
        let lifted = product_lift(&gen_cycle(l), &gen_cycle(l)).unwrap();
        g.bench_with_input(BenchmarkId::new("toric_d1", l), lifted.boundary(0), |b, m| {
            b.iter(|| snf(black_box(m)))
        });
    }
    g.finish();
}

fn lift(c: &mut Criterion) {
    let mut g = c.benchmark_group("general_lift");
    g.sample_size(20);
    for l in [3, 5, 7] {
        let t = gen_toric(l);
        g.bench_with_input(BenchmarkId::new("toric", l), &t, |b, t| b.iter(|| general_lift(t)));
    }
    g.finish();
}

fn dist(c: &mut Criterion) {
    let mut g = c.benchmark_group("distance");
    g.sample_size(10);
    for l in [3, 4] {
        let t = gen_toric(l);
        g.bench_with_input(BenchmarkId::new("toric", l), &t, |b, t| {
            b.iter(|| distance(t, Side::Homology, None).unwrap())
        });
    }
    g.finish();
}

fn basis(c: &mut Criterion) {
    let mut g = c.benchmark_group("cycle_basis_cubic");
    g.sample_size(10);
    for v in [256, 1024, 4096] {
        let graph = random_cubic_graph(v, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(v), &graph, |b, graph| {
            b.iter(|| cycle_basis(graph, CycleBasisOptions::new(3)).unwrap())
        });
    }
    g.finish();
}

fn skeleton(c: &mut Criterion) {
    let mut g = c.benchmark_group("skeleton_zqx");
    g.sample_size(10);
    for l in [2, 3, 4] {
        let lifted = product_lift(&gen_cycle(l), &gen_cycle(l)).unwrap();
        g.bench_with_input(BenchmarkId::new("toric", l), &lifted, |b, c| {
            b.iter(|| {
                let sk = build_x(c).unwrap();
                let sk = attach_qubit_handles(sk, c).unwrap();
                attach_z_handles(sk, c, PairingPolicy::FirstFit).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(kernels, rank_f2, smith, lift, dist, basis, skeleton);
criterion_main!(kernels);
