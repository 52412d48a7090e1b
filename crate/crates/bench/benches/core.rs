use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qd_core::decompose::{construct, DecompKind};
use qd_core::gen;
use qd_core::infinite::{appendix_operator, graph_window_report, jordan_graph_involution_pair, Cell, JordanGraph};
use qd_core::linalg::invariant_factors;
use qd_core::Field;

fn invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariant_factors");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [4, 8, 12] {
        let a = gen::matrix(&mut rng, Field::Prime(5), n, n);
        g.bench_with_input(BenchmarkId::new("F5", n), &a, |b, a| b.iter(|| invariant_factors(black_box(a)).unwrap()));
    }
    g.finish();
}

fn witnesses(c: &mut Criterion) {
    let mut g = c.benchmark_group("construct");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for (f, kind) in [
        (Field::Prime(3), DecompKind::SquareZeroSum),
        (Field::Prime(5), DecompKind::InvolutionProduct),
        (Field::Q, DecompKind::Unipotent2Product),
    ] {
        let a = gen::yes_instance(&mut rng, f, kind, 8);
        g.bench_function(format!("{}/{f}", kind.short_name()), |b| b.iter(|| construct(kind, black_box(&a)).unwrap()));
    }
    g.finish();
}

fn windows(c: &mut Criterion) {
    let mut g = c.benchmark_group("window");
    g.sample_size(10);
    let graph = JordanGraph::from_cells(Field::Q, &[Cell::Finite(3), Cell::Finite(5), Cell::Infinite, Cell::Infinite]).unwrap();
    for n in [16, 64] {
        g.bench_with_input(BenchmarkId::new("involution_report", n), &n, |b, &n| {
            b.iter(|| graph_window_report(&jordan_graph_involution_pair(&graph), n))
        });
    }
    g.bench_function("appendix_window_200", |b| b.iter(|| appendix_operator(Field::Q).window(200)));
    g.finish();
}

criterion_group!(benches, invariants, witnesses, windows);
criterion_main!(benches);
