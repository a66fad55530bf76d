use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qpbasis_core::characters::{char_n_sum, char_product, pbw_census};
use qpbasis_core::qp_enum::{enumerate_census, EnergyForm};
use qpbasis_core::{build_root_system, AlgebraSpec, Family, RootSystemData, WeightSpec};

fn rs(f: Family, l: usize) -> RootSystemData {
    build_root_system(AlgebraSpec::new(f, l).unwrap()).unwrap()
}

fn configs(c: &mut Criterion) {
    let f4 = rs(Family::F, 4);
    let form = EnergyForm::new(&f4, &WeightSpec::GenericVerma).unwrap();
    c.bench_function("walk F4 verma M=6", |b| {
        b.iter(|| {
            let mut n = 0u64;
            form.walk_configs(black_box(6), |_, _| n += 1);
            n
        })
    });
}

fn series(c: &mut Criterion) {
    let d4 = rs(Family::D, 4);
    let b3 = rs(Family::B, 3);
    let mut g = c.benchmark_group("identity sides");
    g.sample_size(10);
    g.bench_function("product D4 M=8", |b| b.iter(|| char_product(&d4, black_box(8))));
    g.bench_function("N-sum D4 M=6", |b| b.iter(|| char_n_sum(&d4, black_box(6)).unwrap()));
    g.bench_function("pbw B3 M=6", |b| b.iter(|| pbw_census(&b3, black_box(6)).unwrap()));
    g.bench_function("census D4 standard(2) M=5", |b| {
        b.iter(|| enumerate_census(&d4, &WeightSpec::Standard { k: 2 }, black_box(5)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, configs, series);
criterion_main!(benches);
