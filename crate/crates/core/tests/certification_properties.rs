use hydrogrid_core::certification::{emissions_factor_tracked, emissions_location, emissions_market, Window};
use hydrogrid_core::{HourlySeries, Unit};
use proptest::prelude::*;

fn kw(v: Vec<f64>) -> HourlySeries {
    HourlySeries::new(v, Unit::Kw).unwrap()
}

fn ef(v: Vec<f64>) -> HourlySeries {
    HourlySeries::new(v, Unit::KgCo2ePerKwh).unwrap()
}

fn flows(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (
        prop::collection::vec(0.0..20_000.0f64, n),
        prop::collection::vec(0.0..20_000.0f64, n),
        prop::collection::vec(0.0..1.2f64, n),
    )
}

proptest! {
    #[test]
    fn market_emissions_are_floored((imp, exp, _) in flows(48), arpp in 0.0..1.0f64, rmf in 0.0..1.5f64) {
        let (e, offset) = emissions_market(&kw(imp), &kw(exp), arpp, rmf, None).unwrap();
        prop_assert!(e >= 0.0);
        prop_assert!(offset <= 0.0);
        prop_assert!(e == 0.0 || offset == 0.0);
    }

    #[test]
    fn matched_trade_nets_to_zero((imp, _, f) in flows(48), ef_l in 0.0..1.2f64) {
        let (i, x) = (kw(imp.clone()), kw(imp));
        let tracked = emissions_factor_tracked(&i, &x, &ef(f.clone()), &ef(f), None).unwrap();
        prop_assert!(tracked.abs() <= 1e-9 * (1.0 + i.sum()));
        prop_assert!(emissions_location(&i, &x, ef_l, None).unwrap().abs() <= 1e-9 * (1.0 + i.sum()));
    }

    #[test]
    fn windows_partition_the_horizon((imp, exp, f) in flows(48), cut in 0usize..=48) {
        let (i, x, f) = (kw(imp), kw(exp), ef(f));
        let part = |w: Window| emissions_factor_tracked(&i, &x, &f, &f, w).unwrap();
        let whole = part(None);
        let split = part(Some(0..cut)) + part(Some(cut..48));
        prop_assert!((whole - split).abs() <= 1e-9 * (1.0 + whole.abs()));
    }

    #[test]
    fn constant_aef_matches_location((imp, exp, _) in flows(48), factor in 0.0..1.2f64) {
        let (i, x) = (kw(imp), kw(exp));
        let tracked = emissions_factor_tracked(&i, &x, &ef(vec![factor; 48]), &ef(vec![factor; 48]), None).unwrap();
        let location = emissions_location(&i, &x, factor, None).unwrap();
        prop_assert!((tracked - location).abs() <= 1e-9 * (1.0 + tracked.abs()));
    }
}

#[test]
fn window_outside_horizon_is_rejected() {
    let i = kw(vec![1.0; 4]);
    assert!(emissions_location(&i, &i, 0.5, Some(2..5)).is_err());
}
