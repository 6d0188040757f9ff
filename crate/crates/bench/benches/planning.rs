use criterion::{black_box, criterion_group, criterion_main, Criterion};
use gridfleet_bench::bundled;
use gridfleet_core::analysis::degradation::depth_weighted_cycles;
use gridfleet_core::analysis::prepare_fleet;
use gridfleet_core::ev::synthetic::{synthetic_drives, synthetic_population};
use gridfleet_core::ev::{bootstrap_fleet, cluster_vehicles, EvSettings};
use gridfleet_core::lp::{HighsBackend, SolveOptions};
use gridfleet_core::slr::{SlrConfig, SlrState};
use gridfleet_core::{build_plan, BalanceMode, ChargingRegime};

fn model_assembly(c: &mut Criterion) {
    let s = bundled("toy2z");
    let fleet = prepare_fleet(&s, 0).unwrap();
    c.bench_function("build_plan toy2z v2g", |b| {
        b.iter(|| build_plan(&s.system, &fleet, ChargingRegime::V2g, BalanceMode::Residual).unwrap())
    });
}

fn surrogate_iteration(c: &mut Criterion) {
    let s = bundled("toy2z");
    let fleet = prepare_fleet(&s, 0).unwrap();
    let plan = build_plan(&s.system, &fleet, ChargingRegime::V1g, BalanceMode::Residual).unwrap();
    let cfg = SlrConfig {
        full_solve_every: 0,
        solver: SolveOptions {
            mip_gap: 1e-3,
            ..SolveOptions::default()
        },
        ..SlrConfig::default()
    };
    let mut state = SlrState::new(&s.system, &plan, &HighsBackend, cfg).unwrap();
    let mut group = c.benchmark_group("slr");
    group.sample_size(10);
    group.bench_function("partial iteration toy2z v1g", |b| b.iter(|| state.iterate().unwrap()));
    group.finish();
}

fn fleet_clustering(c: &mut Criterion) {
    let settings = EvSettings::default();
    let records = synthetic_drives(4000, 1);
    let years = [2025, 2035, 2045];
    let projections = synthetic_population(&years, 6000, 1.6);
    c.bench_function("bootstrap and cluster 4000 drives", |b| {
        b.iter(|| {
            let boot = bootstrap_fleet(&records, &projections, &settings, 1).unwrap();
            cluster_vehicles(&boot.years, &years, 0, &settings).unwrap()
        })
    });
}

fn rainflow(c: &mut Criterion) {
    let trace: Vec<f64> = (0..8760).map(|h| 0.5 + 0.4 * ((h as f64) * 0.7).sin() * ((h as f64) * 0.013).cos()).collect();
    c.bench_function("depth-weighted cycles over a year", |b| b.iter(|| depth_weighted_cycles(black_box(&trace), 1.4)));
}

criterion_group!(benches, model_assembly, surrogate_iteration, fleet_clustering, rainflow);
criterion_main!(benches);
