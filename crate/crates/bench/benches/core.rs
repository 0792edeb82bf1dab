use criterion::{black_box, criterion_group, criterion_main, Criterion};

use grossen::cmform::{hecke_verify, q_expansion};
use grossen::quadfield::{primes_above, ClassGroup};
use grossen::survey::{survey_quadratic_modulus, theorem2_tables};
use grossen::{FieldE, QIdeal, UnitsStructure};
use grossen_bench::{big_class_group_psi, gaussian_psi};

fn class_groups(c: &mut Criterion) {
    let e = FieldE::new(-5460).unwrap();
    c.bench_function("class_group/-5460", |b| b.iter(|| ClassGroup::new(black_box(e), &QIdeal::unit(e)).unwrap()));
    let e = FieldE::new(-4027).unwrap();
    c.bench_function("class_group/-4027", |b| b.iter(|| ClassGroup::new(black_box(e), &QIdeal::unit(e)).unwrap()));
}

fn unit_groups(c: &mut Criterion) {
    let e = FieldE::new(-8).unwrap();
    let m = primes_above(e, 2)[0].pow(12);
    c.bench_function("units/p2^12 in Q(sqrt -2)", |b| b.iter(|| UnitsStructure::new(e, black_box(&m)).unwrap()));
    let s = UnitsStructure::new(e, &m).unwrap();
    let z = e.elem(3, 5);
    c.bench_function("units/dlog", |b| b.iter(|| s.dlog(black_box(&z)).unwrap()));
}

fn forms(c: &mut Criterion) {
    let psi = gaussian_psi();
    c.bench_function("q_expansion/level 32, B=2000", |b| b.iter(|| q_expansion(black_box(&psi), 2000)));
    let f = q_expansion(&psi, 2000);
    c.bench_function("hecke_verify/level 32, B=2000", |b| b.iter(|| hecke_verify(black_box(&f))));
    let psi = big_class_group_psi();
    c.bench_function("q_expansion/-3315, B=500", |b| b.iter(|| q_expansion(black_box(&psi), 500)));
}

fn surveys(c: &mut Criterion) {
    let mut g = c.benchmark_group("survey");
    g.sample_size(10);
    g.bench_function("exponent 3 sweep", |b| b.iter(|| survey_quadratic_modulus(3, 1).unwrap()));
    g.bench_function("rationality field tables", |b| b.iter(|| theorem2_tables().unwrap()));
    g.finish();
}

criterion_group!(benches, class_groups, unit_groups, forms, surveys);
criterion_main!(benches);
