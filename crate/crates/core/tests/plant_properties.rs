//! Properties of optimised plants on random 24-hour zones.

use hydrogrid_core::runner::{run_scenario, RunContext, ScenarioResult};
use hydrogrid_core::{
    CapacityBound, CapacitySpec, GridMode, GridProfile, HourlySeries, PlantParameters, ScenarioSpec,
    TcInterval, Unit, Zone, ZoneLibrary,
};
use proptest::prelude::*;

const T: usize = 24;

fn zone() -> impl Strategy<Value = Zone> {
    (
        prop::collection::vec(-0.02..0.15f64, T),
        prop::collection::vec(0.0..1.2f64, T),
        prop::collection::vec(0.0..1.0f64, T),
        prop::collection::vec(0.0..1.0f64, T),
    )
        .prop_map(|(price, mef, wind_cf, pv_cf)| Zone {
            grid: GridProfile {
                zone_id: "p".into(),
                spot_price: HourlySeries::new(price, Unit::UsdPerKwh).unwrap(),
                aef: HourlySeries::new(mef.iter().map(|m| m * 0.8).collect(), Unit::KgCo2ePerKwh).unwrap(),
                mef: HourlySeries::new(mef, Unit::KgCo2ePerKwh).unwrap(),
                ef_location: 0.71,
                arpp: 0.1872,
                rmf: 0.81,
            },
            ref_wind: HourlySeries::new(wind_cf.iter().map(|c| c * 320_000.0).collect(), Unit::Kw).unwrap(),
            ref_pv: HourlySeries::new(pv_cf.iter().map(|c| c * 1000.0).collect(), Unit::Kw).unwrap(),
        })
}

fn context(z: Zone) -> RunContext {
    let mut zones = ZoneLibrary::new();
    zones.insert("p".into(), z);
    RunContext::new(PlantParameters::default(), zones, "p")
}

/// Storage pinned so every scenario prices it identically, which makes the
/// feasible sets of the temporal-correlation scenarios exactly nested.
fn pinned_storage() -> CapacitySpec {
    CapacitySpec {
        storage_kg: CapacityBound::fixed(2000.0),
        ..CapacitySpec::default()
    }
}

fn solve(ctx: &RunContext, mode: GridMode, tc: Option<TcInterval>) -> ScenarioResult {
    let mut spec = ScenarioSpec::new("p", mode, "p").with_capacities(pinned_storage());
    spec.tc_interval = tc;
    run_scenario(ctx, &spec).expect("grid-connected plants are always feasible")
}

fn check_conservation(r: &ScenarioResult) -> Result<(), TestCaseError> {
    let d = &r.solution.report.dispatch;
    let c_store = r.solution.report.capacities.storage_kg;
    prop_assert!(d.max_balance_residual() <= 1e-6);
    prop_assert!(d.hydrogen_mass_residual(180.0).abs() <= 1e-6);
    for &s in d.soc_kg.iter().chain([&d.soc0_kg]) {
        prop_assert!(s >= -1e-6 && s <= c_store + 1e-6);
    }
    prop_assert!((d.soc_kg[T - 1] - d.soc0_kg).abs() <= 1e-6);
    for t in 0..T {
        prop_assert!((d.h_comp1_kg[t] + d.h_from_store_kg[t] - 180.0).abs() <= 1e-6);
        prop_assert!(d.curtail_kw[t] <= d.gen_wind_kw[t] + d.gen_pv_kw[t] + 1e-6);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn optimal_dispatch_conserves_energy_and_mass(z in zone()) {
        let ctx = context(z);
        for (mode, tc) in [
            (GridMode::GridBuySell, None),
            (GridMode::GridBuySell, Some(TcInterval::Daily)),
            (GridMode::SellOnly, None),
        ] {
            check_conservation(&solve(&ctx, mode, tc))?;
        }
    }

    #[test]
    fn never_buys_and_sells_in_the_same_hour(z in zone()) {
        let r = solve(&context(z), GridMode::GridBuySell, None);
        let d = &r.solution.report.dispatch;
        for t in 0..T {
            // Buying and reselling the same kWh only adds the transmission fee.
            prop_assert!(d.import_kw[t].min(d.export_kw[t]) <= 1e-6, "hour {t}");
        }
    }

    #[test]
    fn hourly_correlation_equals_sell_only(z in zone()) {
        let ctx = context(z);
        let hourly = solve(&ctx, GridMode::GridBuySell, Some(TcInterval::Hourly)).solution.costs.lcoh_usd_per_kg;
        let sell_only = solve(&ctx, GridMode::SellOnly, None).solution.costs.lcoh_usd_per_kg;
        prop_assert!((hourly - sell_only).abs() <= 1e-6 * sell_only.abs().max(1.0));
    }

    #[test]
    fn looser_correlation_is_never_dearer(z in zone()) {
        let ctx = context(z);
        let lcoh = |mode, tc| solve(&ctx, mode, tc).solution.costs.lcoh_usd_per_kg;
        let chain = [
            lcoh(GridMode::GridBuySell, None),
            lcoh(GridMode::GridBuySell, Some(TcInterval::Daily)),
            lcoh(GridMode::GridBuySell, Some(TcInterval::Hourly)),
        ];
        for w in chain.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0), "{chain:?}");
        }
    }
}

#[test]
fn off_grid_without_capacity_is_infeasible() {
    let ctx = context(
        hydrogrid_core::ingest::synth_fixture(hydrogrid_core::ingest::FixtureKind::Flat, T, 0)
            .zone()
            .clone(),
    );
    let zero = CapacitySpec {
        wind_kw: CapacityBound::fixed(0.0),
        pv_kw: CapacityBound::fixed(0.0),
        electrolyser_kw: CapacityBound::fixed(0.0),
        storage_kg: CapacityBound::fixed(0.0),
    };
    let spec = ScenarioSpec::new("dead", GridMode::OffGrid, "p").with_capacities(zero);
    let err = run_scenario(&ctx, &spec).unwrap_err();
    assert_eq!(err.status(), "infeasible");
}
