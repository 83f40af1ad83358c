use criterion::{criterion_group, criterion_main, Criterion};

use qchev_bench::adjoint;
use qchev_core::chevalley::{check_conditions, decompose_with, TraceCache};
use qchev_core::dynamical::{a_operator_rank1_direct, DynamicalWeyl};
use qchev_core::intertwiner::HomSpace;
use qchev_core::{ExactScalar, Weight, WeylGroup};

fn traces(c: &mut Criterion) {
    let v = adjoint("A2");
    c.bench_function("trace A2 adjoint mu=(2,1)", |b| {
        b.iter(|| {
            let h = HomSpace::new(&Weight(vec![2, 1]), &v).unwrap();
            h.expectation_basis().unwrap().iter().map(|p| h.trace(p).unwrap()).count()
        })
    });
}

fn conditions(c: &mut Criterion) {
    let v = adjoint("B2");
    let mut cache = TraceCache::new(&v);
    let f = cache.trace(&Weight(vec![1, 1]), &[ExactScalar::one(), ExactScalar::zero()]).unwrap();
    c.bench_function("check conditions B2 adjoint mu=(1,1)", |b| b.iter(|| check_conditions(&f, &v).unwrap()));
    c.bench_function("decompose B2 adjoint mu=(1,1)", |b| b.iter(|| decompose_with(&f, &mut cache).unwrap()));
}

fn dynamical(c: &mut Criterion) {
    c.bench_function("rank-one A via Verma, m=2 lambda=6", |b| b.iter(|| a_operator_rank1_direct(2, 6, 7).unwrap()));
    let v = adjoint("A2");
    let dw = DynamicalWeyl::new(&v).unwrap();
    let wg = WeylGroup::new(&v.datum);
    c.bench_function("symbolic longest element A2 adjoint", |b| b.iter(|| dw.symbolic_unshifted(wg.longest())));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = traces, conditions, dynamical
}
criterion_main!(benches);
