use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;
use submax_core::cochain::{ArgDomain, Complex};
use submax_core::jet::invariants::{c_class, wilczynski};
use submax_core::jet::OdeSystem;
use submax_core::liealg::{AlgebraParams, LieAlgebra};
use submax_core::lwv::{solve_lwv, ModuleId};
use submax_core::models::build_model;
use submax_core::tanaka::a_phi;

fn algebra(c: &mut Criterion) {
    c.bench_function("check_structure (6,4)", |b| {
        b.iter(|| {
            LieAlgebra::try_new(black_box(6), 4)
                .unwrap()
                .check_structure()
        })
    });
}

fn cohomology(c: &mut Criterion) {
    let g = LieAlgebra::try_new(4, 3).unwrap();
    c.bench_function("solve_lwv A2tr (4,3)", |b| {
        b.iter(|| solve_lwv(&g, ModuleId::A2tr).unwrap())
    });
    let phi = solve_lwv(&g, ModuleId::A2tr).unwrap().cochain;
    c.bench_function("a_phi A2tr (4,3)", |b| b.iter(|| a_phi(&g, &phi).unwrap()));
    let g = LieAlgebra::try_new(3, 2).unwrap();
    let cx = Complex::new(&g);
    let b = cx.bigrades(2, ArgDomain::Negative)[0];
    c.bench_function("hodge_dims C2 (3,2)", |bch| {
        bch.iter(|| cx.hodge_dims(2, black_box(b)).unwrap())
    });
}

fn models(c: &mut Criterion) {
    let g = LieAlgebra::try_new(4, 2).unwrap();
    let m = build_model(&g, ModuleId::A2tr, None).unwrap();
    c.bench_function("model verify A2tr (4,2)", |b| {
        b.iter(|| m.verify(&g).unwrap())
    });
}

fn jets(c: &mut Criterion) {
    let p = AlgebraParams::new(4, 3).unwrap();
    let ode = OdeSystem::builtin(p, ModuleId::A2tr, None).unwrap();
    c.bench_function("c_class A2tr (4,3)", |b| b.iter(|| c_class(&ode).unwrap()));
    c.bench_function("wilczynski A2tr (4,3)", |b| {
        b.iter(|| wilczynski(&ode).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = algebra, cohomology, models, jets
}
criterion_main!(benches);
