use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use spencer_core::complex::{build_total, CochainComplex};
use spencer_core::linalg::{rank_bareiss, rref};
use spencer_core::{DualFunctional, LieAlgebra, ModeFlags, SpencerOperator};

fn su3_op() -> SpencerOperator {
    let lambda = DualFunctional::basis(8, 6);
    SpencerOperator::new(
        LieAlgebra::builtin("su3").unwrap(),
        lambda,
        ModeFlags::default(),
    )
    .unwrap()
}

fn assemble(c: &mut Criterion) {
    let mut group = c.benchmark_group("assemble_matrix_su3");
    for k in 1..=3 {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            // Fresh operator per iteration so the matrix cache does not hide the work.
            b.iter_with_setup(su3_op, |op| black_box(op.assemble_matrix(k)));
        });
    }
    group.finish();
}

fn rank(c: &mut Criterion) {
    let m = su3_op().assemble_matrix(3);
    let mut group = c.benchmark_group("rank_su3_m3");
    group.sample_size(10);
    group.bench_function("rref", |b| b.iter(|| black_box(rref(&m).rank)));
    group.bench_function("bareiss", |b| b.iter(|| black_box(rank_bareiss(&m))));
    group.finish();
}

fn total(c: &mut Criterion) {
    let op = SpencerOperator::new(
        LieAlgebra::builtin("su2").unwrap(),
        DualFunctional::basis(3, 2),
        ModeFlags::default(),
    )
    .unwrap();
    let cx = CochainComplex::circle();
    c.bench_function("total_complex_su2_circle_q3", |b| {
        b.iter(|| {
            black_box(
                build_total(&cx, &op, 3)
                    .unwrap()
                    .d_squared_block_check()
                    .unwrap(),
            )
        })
    });
}

criterion_group!(benches, assemble, rank, total);
criterion_main!(benches);
