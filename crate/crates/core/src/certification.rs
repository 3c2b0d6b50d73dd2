//! Emission accounting for a solved dispatch.
//!
//! Four methods are supported:
//!
//! * **market**: national ARPP/RMF with one REC per MWh exported; floored at
//!   zero, with any surplus reported as a negative REC offset;
//! * **location**: a single annual factor for the zone;
//! * **MEF** and **AEF**: hourly factor tracking, pairing imports with the
//!   buy zone's factor and exports with the sell zone's.
//!
//! Every operation takes an optional batch window `t1..t2`; `None` certifies
//! the full horizon.

use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plant::Dispatch;
use crate::types::{GridProfile, HourlySeries, SeriesError, Unit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificationError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("batch window {start}..{end} outside horizon of {horizon} hours")]
    Window {
        start: usize,
        end: usize,
        horizon: usize,
    },
    #[error("{0}")]
    Domain(&'static str),
}

pub type Window = Option<Range<usize>>;

fn resolve(window: &Window, horizon: usize) -> Result<Range<usize>, CertificationError> {
    match window {
        None => Ok(0..horizon),
        Some(r) if r.start <= r.end && r.end <= horizon => Ok(r.clone()),
        Some(r) => Err(CertificationError::Window {
            start: r.start,
            end: r.end,
            horizon,
        }),
    }
}

fn flows<'a>(
    import: &'a HourlySeries,
    export: &'a HourlySeries,
    window: &Window,
) -> Result<(&'a [f64], &'a [f64]), CertificationError> {
    import.expect_unit(Unit::Kw)?;
    export.expect_unit(Unit::Kw)?;
    export.expect_len(import.len())?;
    let r = resolve(window, import.len())?;
    Ok((&import.values()[r.clone()], &export.values()[r]))
}

/// Market-method emissions in kgCO2e as `(e_market, recs_offset)`.
///
/// `raw = (Σ import·(1 − arpp) − Σ export) · rmf`. A non-negative `raw` is
/// the certified emission with no offset; a negative `raw` certifies zero
/// and returns `raw` as the (negative) surplus REC offset.
pub fn emissions_market(
    import: &HourlySeries,
    export: &HourlySeries,
    arpp: f64,
    rmf: f64,
    window: Window,
) -> Result<(f64, f64), CertificationError> {
    if !(0.0..=1.0).contains(&arpp) {
        return Err(CertificationError::Domain("arpp must lie in [0, 1]"));
    }
    if !(rmf >= 0.0) {
        return Err(CertificationError::Domain("rmf must be non-negative"));
    }
    let (imp, exp) = flows(import, export, &window)?;
    let raw = (imp.iter().sum::<f64>() * (1.0 - arpp) - exp.iter().sum::<f64>()) * rmf;
    Ok(if raw >= 0.0 { (raw, 0.0) } else { (0.0, raw) })
}

/// Location-method emissions `Σ (import − export) · ef` in kgCO2e.
pub fn emissions_location(
    import: &HourlySeries,
    export: &HourlySeries,
    ef_location: f64,
    window: Window,
) -> Result<f64, CertificationError> {
    if !(ef_location >= 0.0) {
        return Err(CertificationError::Domain("location factor must be non-negative"));
    }
    let (imp, exp) = flows(import, export, &window)?;
    Ok(imp.iter().zip(exp).map(|(i, e)| (i - e) * ef_location).sum())
}

/// Location-method emissions when imports and exports sit in different zones.
pub fn emissions_location_split(
    import: &HourlySeries,
    export: &HourlySeries,
    ef_buy: f64,
    ef_sell: f64,
    window: Window,
) -> Result<f64, CertificationError> {
    let (imp, exp) = flows(import, export, &window)?;
    Ok(imp.iter().sum::<f64>() * ef_buy - exp.iter().sum::<f64>() * ef_sell)
}

/// Hourly factor tracking `Σ import·ef_buy − export·ef_sell` in kgCO2e.
pub fn emissions_factor_tracked(
    import: &HourlySeries,
    export: &HourlySeries,
    ef_buy: &HourlySeries,
    ef_sell: &HourlySeries,
    window: Window,
) -> Result<f64, CertificationError> {
    let (imp, exp) = flows(import, export, &window)?;
    for ef in [ef_buy, ef_sell] {
        ef.expect_unit(Unit::KgCo2ePerKwh)?;
        ef.expect_len(import.len())?;
    }
    let r = resolve(&window, import.len())?;
    let (fb, fs) = (&ef_buy.values()[r.clone()], &ef_sell.values()[r]);
    Ok((0..imp.len()).map(|t| imp[t] * fb[t] - exp[t] * fs[t]).sum())
}

/// Fraction of nameplate RE output actually generated.
pub fn re_capacity_factor(
    gen_wind: &HourlySeries,
    gen_pv: &HourlySeries,
    c_wind: f64,
    c_pv: f64,
) -> Result<f64, CertificationError> {
    let total = c_wind + c_pv;
    if !(total > 0.0) {
        return Err(CertificationError::Domain("total RE capacity must be positive"));
    }
    gen_wind.expect_unit(Unit::Kw)?;
    gen_pv.expect_unit(Unit::Kw)?;
    gen_pv.expect_len(gen_wind.len())?;
    Ok((gen_wind.sum() + gen_pv.sum()) / (total * gen_wind.len() as f64))
}

/// Applicable renewable power percentage `(E_re + E_ad) / (E_ac − E_ex)`.
pub fn arpp(e_re: f64, e_ad: f64, e_ac: f64, e_ex: f64) -> Result<f64, CertificationError> {
    let denom = e_ac - e_ex;
    if !(denom > 0.0) {
        return Err(CertificationError::Domain(
            "relevant acquisitions must exceed exemptions",
        ));
    }
    Ok((e_re + e_ad) / denom)
}

/// Residual mix factor in kgCO2e/kWh from national emissions `e_kg`,
/// generation `q_mwh` and RECs `recs_mwh`.
pub fn rmf(e_kg: f64, q_mwh: f64, recs_mwh: f64) -> Result<f64, CertificationError> {
    let residual_kwh = q_mwh * 1000.0 - recs_mwh * 1000.0;
    if !(residual_kwh > 0.0) {
        return Err(CertificationError::Domain("residual generation must be positive"));
    }
    Ok(e_kg / residual_kwh)
}

/// Per-kg intensities under every method, plus normalised differences against
/// the MEF method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmissionsReport {
    pub e_market_kg: f64,
    /// Certified market intensity, floored at zero.
    pub ei_market: f64,
    /// Surplus REC offset per kg H2 (≤ 0).
    pub ei_recs: f64,
    pub e_location_kg: f64,
    pub ei_location: f64,
    pub e_mef_kg: f64,
    pub ei_mef: f64,
    pub e_aef_kg: f64,
    pub ei_aef: f64,
    pub d_market: Option<f64>,
    pub d_location: Option<f64>,
    pub annual_h2_kg: f64,
    pub recs_generated_mwh: f64,
}

/// `(d_market, d_location)`; `None` when `ei_mef` is zero.
pub fn difference_metrics(report: &EmissionsReport) -> (Option<f64>, Option<f64>) {
    let mef = report.ei_mef;
    if mef == 0.0 || !mef.is_finite() {
        return (None, None);
    }
    let market = if report.ei_market > 0.0 {
        report.ei_market
    } else {
        report.ei_recs
    };
    (
        Some((mef - market) / mef.abs()),
        Some((mef - report.ei_location) / mef.abs()),
    )
}

/// Certifies a dispatch. `buy` supplies factors for imports, `sell` for
/// exports; pass the same profile twice for a co-located plant. The market
/// method uses the buy zone's ARPP and RMF.
pub fn certify(
    dispatch: &Dispatch,
    buy: &GridProfile,
    sell: &GridProfile,
    load_kg_per_h: f64,
    window: Window,
) -> Result<EmissionsReport, CertificationError> {
    let import = dispatch.import_series();
    let export = dispatch.export_series();
    let r = resolve(&window, import.len())?;
    let annual_h2_kg = load_kg_per_h * r.len() as f64;
    if !(annual_h2_kg > 0.0) {
        return Err(CertificationError::Domain("batch must deliver hydrogen"));
    }
    let window = Some(r.clone());

    let (e_market_kg, recs_offset) = emissions_market(&import, &export, buy.arpp, buy.rmf, window.clone())?;
    let e_location_kg = if buy.ef_location == sell.ef_location {
        emissions_location(&import, &export, buy.ef_location, window.clone())?
    } else {
        emissions_location_split(
            &import,
            &export,
            buy.ef_location,
            sell.ef_location,
            window.clone(),
        )?
    };
    let e_mef_kg = emissions_factor_tracked(&import, &export, &buy.mef, &sell.mef, window.clone())?;
    let e_aef_kg = emissions_factor_tracked(&import, &export, &buy.aef, &sell.aef, window)?;

    let mut report = EmissionsReport {
        e_market_kg,
        ei_market: e_market_kg / annual_h2_kg,
        ei_recs: recs_offset / annual_h2_kg,
        e_location_kg,
        ei_location: e_location_kg / annual_h2_kg,
        e_mef_kg,
        ei_mef: e_mef_kg / annual_h2_kg,
        e_aef_kg,
        ei_aef: e_aef_kg / annual_h2_kg,
        d_market: None,
        d_location: None,
        annual_h2_kg,
        recs_generated_mwh: export.values()[r].iter().sum::<f64>() / 1000.0,
    };
    (report.d_market, report.d_location) = difference_metrics(&report);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kw(v: f64, t: usize) -> HourlySeries {
        HourlySeries::constant(v, t, Unit::Kw)
    }

    fn ef(v: f64, t: usize) -> HourlySeries {
        HourlySeries::constant(v, t, Unit::KgCo2ePerKwh)
    }

    const DIRECT_KW: f64 = 180.0 * (39.4 / 0.7 + 0.83);

    #[test]
    fn market_examples() {
        let t = 24;
        let h2 = 180.0 * t as f64;
        let (e, off) = emissions_market(&kw(DIRECT_KW, t), &kw(0.0, t), 0.1872, 0.81, None).unwrap();
        assert_eq!(off, 0.0);
        assert!((e / h2 - 37.6).abs() < 0.01);

        let (e, off) = emissions_market(&kw(500.0, t), &kw(500.0, t), 0.1872, 0.81, None).unwrap();
        assert_eq!(e, 0.0);
        assert!((off + 0.1872 * 500.0 * 24.0 * 0.81).abs() < 1e-9);

        assert_eq!(
            emissions_market(&kw(0.0, t), &kw(0.0, t), 0.1872, 0.81, None).unwrap(),
            (0.0, 0.0)
        );
        assert!(emissions_market(&kw(0.0, t), &kw(0.0, t), 1.5, 0.81, None).is_err());
    }

    #[test]
    fn location_examples() {
        let t = 10;
        let h2 = 180.0 * t as f64;
        let qld = emissions_location(&kw(DIRECT_KW, t), &kw(0.0, t), 0.71, None).unwrap() / h2;
        assert!((qld - 40.55).abs() < 0.01);
        let tas = emissions_location(&kw(DIRECT_KW, t), &kw(0.0, t), 0.15, None).unwrap() / h2;
        assert!((tas - 8.57).abs() < 0.01);
        let e = emissions_location(&kw(0.0, 1), &kw(1000.0, 1), 0.5, None).unwrap();
        assert_eq!(e, -500.0);
    }

    #[test]
    fn tracked_examples() {
        let t = 6;
        let net_zero = emissions_factor_tracked(&kw(300.0, t), &kw(300.0, t), &ef(0.4, t), &ef(0.4, t), None);
        assert_eq!(net_zero.unwrap(), 0.0);

        let h2 = 180.0 * t as f64;
        let e =
            emissions_factor_tracked(&kw(DIRECT_KW, t), &kw(0.0, t), &ef(0.5, t), &ef(0.5, t), None).unwrap();
        assert!((e / h2 - 28.56).abs() < 0.01);

        let energy = 1000.0;
        let e = emissions_factor_tracked(&kw(energy, t), &kw(energy, t), &ef(0.52, t), &ef(0.19, t), None)
            .unwrap();
        assert!((e - energy * t as f64 * 0.33).abs() < 1e-9);
    }

    #[test]
    fn windows() {
        let imp = HourlySeries::new(vec![1.0, 2.0, 3.0, 4.0], Unit::Kw).unwrap();
        let exp = kw(0.0, 4);
        assert_eq!(emissions_location(&imp, &exp, 1.0, Some(1..3)).unwrap(), 5.0);
        assert!(emissions_location(&imp, &exp, 1.0, Some(2..5)).is_err());
        let bad_unit = ef(1.0, 4);
        assert!(emissions_location(&bad_unit, &exp, 1.0, None).is_err());
    }

    #[test]
    fn capacity_factor_examples() {
        assert_eq!(
            re_capacity_factor(&kw(10.0, 5), &kw(20.0, 5), 10.0, 20.0).unwrap(),
            1.0
        );
        assert_eq!(
            re_capacity_factor(&kw(0.0, 5), &kw(0.0, 5), 10.0, 20.0).unwrap(),
            0.0
        );
        assert_eq!(
            re_capacity_factor(&kw(5.0, 5), &kw(10.0, 5), 10.0, 20.0).unwrap(),
            0.5
        );
        assert!(re_capacity_factor(&kw(0.0, 5), &kw(0.0, 5), 0.0, 0.0).is_err());
    }

    #[test]
    fn arpp_and_rmf() {
        assert_eq!(arpp(10.0, 0.0, 100.0, 0.0).unwrap(), 0.10);
        assert_eq!(arpp(0.0, 0.0, 100.0, 0.0).unwrap(), 0.0);
        assert!((arpp(15.0, 3.72, 110.0, 10.0).unwrap() - 0.1872).abs() < 1e-12);
        assert!(arpp(1.0, 0.0, 5.0, 5.0).is_err());

        assert!((rmf(810_000.0, 1000.0, 0.0).unwrap() - 0.81).abs() < 1e-12);
        assert!(rmf(1.0, 1000.0, 1000.0).is_err());
        assert_eq!(rmf(0.0, 1000.0, 0.0).unwrap(), 0.0);
    }

    fn report(ei_mef: f64, ei_market: f64, ei_recs: f64, ei_location: f64) -> EmissionsReport {
        EmissionsReport {
            e_market_kg: 0.0,
            ei_market,
            ei_recs,
            e_location_kg: 0.0,
            ei_location,
            e_mef_kg: 0.0,
            ei_mef,
            e_aef_kg: 0.0,
            ei_aef: 0.0,
            d_market: None,
            d_location: None,
            annual_h2_kg: 1.0,
            recs_generated_mwh: 0.0,
        }
    }

    #[test]
    fn difference_examples() {
        let (dm, dl) = difference_metrics(&report(27.61, 37.6, 0.0, 40.55));
        assert!((dl.unwrap() + 0.469).abs() < 5e-4);
        assert!((dm.unwrap() + 0.36).abs() < 5e-3);
        let (_, dl) = difference_metrics(&report(10.0, 1.0, 0.0, 10.0));
        assert_eq!(dl, Some(0.0));
        // Floor triggered: compare against the REC offset.
        let (dm, _) = difference_metrics(&report(-13.62, 0.0, -26.02, -21.41));
        assert!((dm.unwrap() - 0.91).abs() < 5e-3);
        assert_eq!(difference_metrics(&report(0.0, 1.0, 0.0, 1.0)), (None, None));
    }
}
