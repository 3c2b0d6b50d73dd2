use hydrogrid_core::ingest::{
    load_grid_profile, read_json, synth_fixture, write_grid_profile, write_json, FixtureKind, SuiteReport,
};
use hydrogrid_core::runner::{preset_suite, run_suite, suite_report, RunContext};
use hydrogrid_core::types::convert_price;
use hydrogrid_core::{GridProfile, HourlySeries, PlantParameters, Unit, ZoneLibrary};
use proptest::prelude::*;

proptest! {
    #[test]
    fn price_conversion_is_linear(a in -1000.0..20_000.0f64, b in -1000.0..20_000.0f64, fx in 0.3..1.5f64, k in -4.0..4.0f64) {
        let c = |x: f64| convert_price(x, fx).unwrap();
        let tol = 1e-12 * (1.0 + a.abs() + b.abs()) * fx;
        prop_assert!((c(a + b) - (c(a) + c(b))).abs() <= tol);
        prop_assert!((c(k * a) - k * c(a)).abs() <= tol * (1.0 + k.abs()));
        prop_assert_eq!(c(0.0), 0.0);
    }

    #[test]
    fn ingested_grid_csv_round_trips_exactly(aud in prop::collection::vec(-500.0..2000.0f64, 1..48), fx in 0.5..1.0f64) {
        // Only prices that came out of ingest are guaranteed an exact AUD preimage.
        let t = aud.len();
        let prices = aud.iter().map(|&a| convert_price(a, fx).unwrap()).collect();
        let profile = GridProfile {
            zone_id: "RT".into(),
            spot_price: HourlySeries::new(prices, Unit::UsdPerKwh).unwrap(),
            mef: HourlySeries::constant(0.123456789, t, Unit::KgCo2ePerKwh),
            aef: HourlySeries::constant(1.0 / 3.0, t, Unit::KgCo2ePerKwh),
            ef_location: 0.66,
            arpp: 0.1872,
            rmf: 0.81,
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rt.csv");
        write_grid_profile(&profile, &path, fx).unwrap();
        let back = load_grid_profile(&path, t, fx).unwrap();
        let bits = |p: &GridProfile| p.spot_price.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
        prop_assert_eq!(bits(&back), bits(&profile));
        prop_assert_eq!(back, profile);
    }
}

#[test]
fn suite_report_round_trips_bit_exactly() {
    let mut zones = ZoneLibrary::new();
    zones.insert(
        "rw".into(),
        synth_fixture(FixtureKind::RandomWalk, 72, 9).zone().clone(),
    );
    let ctx = RunContext::new(PlantParameters::default(), zones, "rw");
    let report = suite_report(&ctx, &run_suite(&ctx, &preset_suite("rw")));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    write_json(&report, &path).unwrap();
    let back: SuiteReport = read_json(&path).unwrap();
    assert_eq!(back, report);

    let again = dir.path().join("again.json");
    write_json(&back, &again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());

    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"schema_version\": 1"));
    assert!(text.contains("\"lcoh_usd_per_kg\""));
}
