use criterion::{criterion_group, criterion_main, Criterion};
use soiltherm::config::SimulationConfig;

const CHAMBER: &str = include_str!("../../../configs/chamber_8mbar.toml");

fn diurnal(c: &mut Criterion) {
    let mut cfg = SimulationConfig::parse(CHAMBER).unwrap();
    cfg.run.cycles = 2;
    cfg.run.discard_cycles = 1;
    let mut g = c.benchmark_group("run_diurnal");
    g.sample_size(10);
    g.bench_function("chamber 8 mbar, 100 nodes", |b| b.iter(|| cfg.simulate().unwrap()));
    g.finish();
}

criterion_group!(benches, diurnal);
criterion_main!(benches);
