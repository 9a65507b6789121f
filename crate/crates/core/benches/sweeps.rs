use std::hint::black_box;

use cantor_union::construct::construct_admissible;
use cantor_union::enumerate::{count_self_similar, enumerate_admissible, DEFAULT_ENUMERATION_BUDGET};
use cantor_union::exec::Execution;
use cantor_union::ifs::extract_ifs;
use cantor_union::laurent::Beta;
use cantor_union::numeric::{verify_numeric, NumericOptions};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_admissible");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "m2_N2_tau3"), &exec, |b, &exec| {
            b.iter(|| enumerate_admissible(2, 2, 3, DEFAULT_ENUMERATION_BUDGET, black_box(exec)).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("count_self_similar");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "m3_N1_tau4"), &exec, |b, &exec| {
            b.iter(|| count_self_similar(3, 1, 4, DEFAULT_ENUMERATION_BUDGET, black_box(exec)).unwrap())
        });
    }
    group.finish();
}

fn numeric(c: &mut Criterion) {
    let t = construct_admissible(9, 3).unwrap();
    let ifs = extract_ifs(&t).unwrap();
    let beta = Beta::standard(3);
    let mut group = c.benchmark_group("verify_numeric");
    group.sample_size(10);
    for (name, exec) in MODES {
        for float in [false, true] {
            let opts = NumericOptions {
                samples: 200,
                depth: 12,
                float,
                exec,
                ..NumericOptions::default()
            };
            let id = BenchmarkId::new(name, if float { "float" } else { "exact" });
            group.bench_with_input(id, &opts, |b, opts| b.iter(|| verify_numeric(&t, &ifs, &beta, black_box(opts)).unwrap()));
        }
    }
    group.finish();
}

criterion_group!(benches, enumeration, numeric);
criterion_main!(benches);
