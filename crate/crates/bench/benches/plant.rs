use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hydrogrid_bench::fixture_context;
use hydrogrid_core::ingest::FixtureKind;
use hydrogrid_core::lp::write_lp;
use hydrogrid_core::plant::build_plant;
use hydrogrid_core::runner::{preset_suite, run_scenario, run_suite};
use hydrogrid_core::{CapacitySpec, GridMode, ScenarioSpec};

fn build(c: &mut Criterion) {
    let mut group = c.benchmark_group("build_plant");
    for horizon in [168, 8760] {
        let ctx = fixture_context(FixtureKind::Diurnal, horizon);
        let zone = &ctx.zones["diurnal"];
        group.bench_with_input(BenchmarkId::from_parameter(horizon), &horizon, |b, &h| {
            b.iter(|| {
                build_plant(
                    &ctx.params,
                    &zone.ref_wind,
                    &zone.ref_pv,
                    &CapacitySpec::default(),
                    GridMode::GridBuySell,
                    h,
                    0.83,
                )
                .unwrap()
            })
        });
    }
    group.finish();

    let ctx = fixture_context(FixtureKind::Diurnal, 8760);
    let zone = &ctx.zones["diurnal"];
    let (model, _) = build_plant(
        &ctx.params,
        &zone.ref_wind,
        &zone.ref_pv,
        &CapacitySpec::default(),
        GridMode::GridBuySell,
        8760,
        0.83,
    )
    .unwrap();
    c.bench_function("write_lp/8760", |b| {
        b.iter(|| {
            let mut buf = Vec::with_capacity(1 << 22);
            write_lp(black_box(&model), &mut buf).unwrap();
            buf
        })
    });
}

fn solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve");
    group.sample_size(10);
    for (name, tc) in [
        ("flexible", None),
        ("daily", Some(hydrogrid_core::TcInterval::Daily)),
    ] {
        let ctx = fixture_context(FixtureKind::Diurnal, 720);
        let mut spec = ScenarioSpec::new(name, GridMode::GridBuySell, "diurnal");
        spec.tc_interval = tc;
        group.bench_function(format!("{name}/720"), |b| {
            b.iter(|| run_scenario(&ctx, &spec).unwrap())
        });
    }
    let ctx = fixture_context(FixtureKind::RandomWalk, 168);
    let suite = preset_suite("random-walk");
    group.bench_function("suite/168", |b| b.iter(|| run_suite(&ctx, black_box(&suite))));
    group.finish();
}

criterion_group!(benches, build, solve);
criterion_main!(benches);
