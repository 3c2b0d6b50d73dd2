use criterion::{criterion_group, criterion_main, Criterion};
use hydrogrid_core::ingest::{
    load_grid_profile, load_re_profile, synth_fixture, write_grid_profile, write_re_profile, FixtureKind,
};
use hydrogrid_core::PlantParameters;

fn ingest(c: &mut Criterion) {
    let dir = tempfile::tempdir().unwrap();
    let fixture = synth_fixture(FixtureKind::RandomWalk, 8760, 3);
    let zone = fixture.zone();
    let grid = dir.path().join("grid.csv");
    let re = dir.path().join("re.csv");
    write_grid_profile(&zone.grid, &grid, 0.7).unwrap();
    write_re_profile(&zone.ref_wind, &zone.ref_pv, &re).unwrap();
    let params = PlantParameters::default();

    c.bench_function("load_grid_profile/8760", |b| {
        b.iter(|| load_grid_profile(&grid, 8760, 0.7).unwrap())
    });
    c.bench_function("load_re_profile/8760", |b| {
        b.iter(|| load_re_profile(&re, 8760, &params).unwrap())
    });
    c.bench_function("write_grid_profile/8760", |b| {
        b.iter(|| write_grid_profile(&zone.grid, &dir.path().join("out.csv"), 0.7).unwrap())
    });
}

criterion_group!(benches, ingest);
criterion_main!(benches);
