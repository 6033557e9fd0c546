use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use deformed_renyi::deformed_exp::builtin_families;
use deformed_renyi::existence::{
    default_u_grid, default_v_grid, geometric_lambdas, DEFAULT_THRESHOLD,
};
use deformed_renyi::{
    alpha_sweep, construct_u0_sequence, growth_envelope_check, ratio_limsup_probe, DeformedExp,
    Execution, MeasureModel, ProbabilityPair, SolverConfig, U0,
};

const MODES: [(&str, Execution); 2] = [
    ("parallel", Execution::Parallel),
    ("sequential", Execution::Sequential),
];

fn grid_pair(n: usize) -> ProbabilityPair {
    let m = MeasureModel::trapezoid(-6.0, 6.0, n).unwrap();
    let nodes = m.nodes().unwrap().to_vec();
    let p: Vec<f64> = nodes.iter().map(|x| (-x * x / 2.0).exp()).collect();
    let q: Vec<f64> = nodes
        .iter()
        .map(|x| (-(x - 1.0).powi(2) / 3.0).exp())
        .collect();
    ProbabilityPair::from_raw(m, &p, &q).unwrap()
}

fn sweep(c: &mut Criterion) {
    let pair = grid_pair(4096);
    let alphas: Vec<f64> = (1..64).map(|k| k as f64 / 64.0).collect();
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("alpha_sweep");
    g.sample_size(10);
    for phi in [DeformedExp::exp(), DeformedExp::kaniadakis(0.5).unwrap()] {
        for (name, mode) in MODES {
            g.bench_with_input(BenchmarkId::new(name, phi.id()), &mode, |b, &mode| {
                b.iter(|| {
                    alpha_sweep(&phi, &pair, black_box(&alphas), &U0::one(), &cfg, mode).unwrap()
                })
            });
        }
    }
    g.finish();
}

fn probes(c: &mut Criterion) {
    let phi = DeformedExp::tsallis(0.5).unwrap();
    let mut g = c.benchmark_group("probes");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(BenchmarkId::new("ratio", name), |b| {
            b.iter(|| {
                ratio_limsup_probe(&phi, 1.0, black_box(200.0), DEFAULT_THRESHOLD, mode).unwrap()
            })
        });
        let u = default_u_grid(&phi, 0.0, 100.0);
        let v = default_v_grid();
        g.bench_function(BenchmarkId::new("envelope", name), |b| {
            b.iter(|| growth_envelope_check(&phi, 3.0, 1.0, 0.0, black_box(&u), &v, mode).unwrap())
        });
    }
    g.finish();
}

fn construction(c: &mut Criterion) {
    let lambdas = geometric_lambdas(0.3, 0.5, 200);
    let mut g = c.benchmark_group("construct_u0");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                for phi in builtin_families() {
                    black_box(
                        construct_u0_sequence(&phi, 0.5, &lambdas, None, 1.0, 64, mode).unwrap(),
                    );
                }
            })
        });
    }
    g.finish();
}

criterion_group!(benches, sweep, probes, construction);
criterion_main!(benches);
