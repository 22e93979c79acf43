use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use g2ssd::bethe::{population_bfs, Kind, System};
use g2ssd::g2::{associated_two_form, standard_three_form, verify_standard_basis, VerifyMode};
use g2ssd::polyspace::PolySpace;
use g2ssd::suite::deg6_standard_basis;
use g2ssd::{Exec, QPoly};

const BACKENDS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ramification(c: &mut Criterion) {
    let mut g = c.benchmark_group("ramification");
    let v = PolySpace::g2_monomial(2, 5);
    for (name, exec) in BACKENDS {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| v.ramification_with(black_box(e)).unwrap())
        });
    }
    g.finish();
}

fn table_check(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_standard_basis");
    let v = PolySpace::polys_up_to(6);
    let basis = deg6_standard_basis();
    for (name, exec) in BACKENDS {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| verify_standard_basis(&v, &basis, VerifyMode::Full, black_box(e)).unwrap())
        });
    }
    g.finish();
}

fn two_form(c: &mut Criterion) {
    let mut g = c.benchmark_group("associated_two_form");
    let w = standard_three_form();
    for (name, exec) in BACKENDS {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| associated_two_form(&w, black_box(e)))
        });
    }
    g.finish();
}

fn population(c: &mut Criterion) {
    let mut g = c.benchmark_group("population_bfs_depth4");
    g.sample_size(10);
    let sys = System::trivial(Kind::G2);
    let seed = [QPoly::one(), QPoly::one()];
    for (name, exec) in BACKENDS {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| population_bfs(&sys, &seed, 4, black_box(e)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, ramification, table_check, two_form, population);
criterion_main!(benches);
