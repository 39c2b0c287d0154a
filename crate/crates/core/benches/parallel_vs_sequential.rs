use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use denomlab::par;
use denomlab::resonance::resonance_scaling_experiment;
use denomlab::stats::{qmin_values, PlanSpec};
use denomlab::{FareyLevel, Rational};

fn run_both<R>(c: &mut Criterion, name: &str, f: impl Fn() -> R) {
    let mut g = c.benchmark_group(name);
    g.sample_size(10);
    g.bench_function(BenchmarkId::new("parallel", ""), |b| b.iter(&f));
    g.bench_function(BenchmarkId::new("sequential", ""), |b| b.iter(|| par::sequential(&f)));
    g.finish();
}

fn qmin_sampling(c: &mut Criterion) {
    let plan = PlanSpec::from_json(
        r#"{"n": 2, "mode": "continuous-mc", "delta": "1/1000", "samples": 20000, "seed": 7}"#,
    )
    .and_then(|s| s.experiment_plan())
    .map(|(p, _)| p)
    .expect("valid plan");
    run_both(c, "qmin_sampling_2d", || qmin_values(&plan).unwrap());
}

fn farey_stream(c: &mut Criterion) {
    let level = FareyLevel::integer(2, 120).unwrap();
    run_both(c, "farey_stream_2d_q120", || {
        denomlab::farey::farey_stream_par(&level, |p, q| {
            std::hint::black_box((p, q));
        })
    });
}

fn resonance(c: &mut Criterion) {
    let rhos = [Rational::new(1, 10_000).unwrap()];
    run_both(c, "resonance_2d", || resonance_scaling_experiment(2, &rhos, 2000, 3).unwrap());
}

criterion_group!(benches, qmin_sampling, farey_stream, resonance);
criterion_main!(benches);
