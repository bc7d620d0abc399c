use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mtj_ising::commands::bundled_curve;
use mtj_ising::device::DeviceParams;
use mtj_ising::ising::{run_restarts, AnnealSchedule, CurveBackend, Periphery, RunConfig};
use mtj_ising::magnetics::estimate_psw;
use mtj_ising::problems::{brute_force, maxcut_encode, WeightedGraph};
use mtj_ising::{Execution, RngStream};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn write_trials(c: &mut Criterion) {
    let p = DeviceParams::default();
    let spin = p.macrospin().unwrap();
    let cfg = p.integrator();
    let t = p.timings();
    let mut group = c.benchmark_group("estimate_psw_32_trials");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| estimate_psw(&spin, 90e-6, t.t_write, t.t_relax, 32, &cfg, RngStream::new(1, 0), exec).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = maxcut_encode(&WeightedGraph::random(18, 0.5, 1..=3, &mut rng));
    let mut group = c.benchmark_group("brute_force_18_spins");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| brute_force(&g, 24, exec).unwrap()));
    }
    group.finish();
}

fn restarts(c: &mut Criterion) {
    let curve = bundled_curve().unwrap();
    let sched = AnnealSchedule::calibrated(&curve).unwrap();
    let backend = CurveBackend { curve };
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let g = maxcut_encode(&WeightedGraph::random(64, 0.1, 1..=1, &mut rng));
    let cfg = RunConfig::default();
    let seeds: Vec<u64> = (0..16).collect();
    let mut group = c.benchmark_group("run_restarts_16x500_sweeps");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_restarts(&g, &backend, &sched, &cfg, &Periphery::default(), &seeds, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, write_trials, oracle, restarts);
criterion_main!(benches);
