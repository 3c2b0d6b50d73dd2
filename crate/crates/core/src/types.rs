//! Canonical domain types.
//!
//! Internal units are fixed: USD/kWh for prices, kgCO2e/kWh for emission
//! factors, kW for power (one step is one hour, so kW and kWh per step are
//! interchangeable), kg and kg/h for hydrogen. Anything in other units is
//! converted at the ingestion boundary.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Unit tag carried by every [`HourlySeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    UsdPerKwh,
    KgCo2ePerKwh,
    Kw,
    KgPerH,
    Dimensionless,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Unit::UsdPerKwh => "USD/kWh",
            Unit::KgCo2ePerKwh => "kgCO2e/kWh",
            Unit::Kw => "kW",
            Unit::KgPerH => "kg/h",
            Unit::Dimensionless => "-",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("non-finite value {value} at hour {hour}")]
    NonFinite { hour: usize, value: f64 },
    #[error("unit mismatch: expected {expected}, found {found}")]
    UnitMismatch { expected: Unit, found: Unit },
    #[error("length mismatch: expected {expected} hours, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Fixed-length hourly series with a unit tag.
///
/// Values are guaranteed finite. Arithmetic between two series only goes
/// through the `checked_*` methods, which refuse to mix units or lengths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HourlySeries {
    values: Vec<f64>,
    unit: Unit,
    start_hour_index: usize,
}

impl HourlySeries {
    pub fn new(values: Vec<f64>, unit: Unit) -> Result<Self, SeriesError> {
        Self::with_start(values, unit, 0)
    }

    pub fn with_start(values: Vec<f64>, unit: Unit, start_hour_index: usize) -> Result<Self, SeriesError> {
        if let Some((hour, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(SeriesError::NonFinite { hour, value });
        }
        Ok(Self {
            values,
            unit,
            start_hour_index,
        })
    }

    /// # Panics
    /// If `value` is not finite.
    pub fn constant(value: f64, len: usize, unit: Unit) -> Self {
        assert!(value.is_finite(), "constant series value must be finite");
        Self {
            values: vec![value; len],
            unit,
            start_hour_index: 0,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn start_hour_index(&self) -> usize {
        self.start_hour_index
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn expect_unit(&self, unit: Unit) -> Result<(), SeriesError> {
        if self.unit == unit {
            Ok(())
        } else {
            Err(SeriesError::UnitMismatch {
                expected: unit,
                found: self.unit,
            })
        }
    }

    pub fn expect_len(&self, len: usize) -> Result<(), SeriesError> {
        if self.values.len() == len {
            Ok(())
        } else {
            Err(SeriesError::LengthMismatch {
                expected: len,
                found: self.values.len(),
            })
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self, SeriesError> {
        other.expect_unit(self.unit)?;
        other.expect_len(self.len())?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::with_start(values, self.unit, self.start_hour_index)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Multiplies every value by a dimensionless factor.
    pub fn scale(&self, factor: f64) -> Result<Self, SeriesError> {
        Self::with_start(
            self.values.iter().map(|v| v * factor).collect(),
            self.unit,
            self.start_hour_index,
        )
    }
}

/// Converts a spot price in AUD/MWh to USD/kWh.
pub fn convert_price(aud_per_mwh: f64, fx_usd_per_aud: f64) -> Result<f64, ValidationIssue> {
    if !aud_per_mwh.is_finite() {
        return Err(ValidationIssue::NonFinite {
            field: "spot_price".into(),
            hour: None,
        });
    }
    if !(fx_usd_per_aud.is_finite() && fx_usd_per_aud > 0.0) {
        return Err(ValidationIssue::OutOfRange {
            field: "fx_usd_per_aud".into(),
            value: fx_usd_per_aud,
        });
    }
    Ok(aud_per_mwh * fx_usd_per_aud / 1000.0)
}

/// One bidding zone's hourly market data and annual accounting factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridProfile {
    pub zone_id: String,
    /// USD/kWh
    pub spot_price: HourlySeries,
    /// kgCO2e/kWh
    pub mef: HourlySeries,
    /// kgCO2e/kWh
    pub aef: HourlySeries,
    /// Annual scope-2 location factor, kgCO2e/kWh.
    pub ef_location: f64,
    /// Applicable renewable power percentage as a fraction.
    pub arpp: f64,
    /// Residual mix factor, kgCO2e/kWh.
    pub rmf: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationIssue {
    #[error("{field}: expected {expected} hours, found {found}")]
    Length {
        field: String,
        expected: usize,
        found: usize,
    },
    #[error("{field}: non-finite value{}", hour.map(|h| format!(" at hour {h}")).unwrap_or_default())]
    NonFinite { field: String, hour: Option<usize> },
    #[error("{field}: unit {found}, expected {expected}")]
    Unit {
        field: String,
        expected: Unit,
        found: Unit,
    },
    #[error("{field}: value {value} out of range")]
    OutOfRange { field: String, value: f64 },
}

fn check_series(
    issues: &mut Vec<ValidationIssue>,
    field: &str,
    series: &HourlySeries,
    unit: Unit,
    horizon: usize,
) {
    if series.len() != horizon {
        issues.push(ValidationIssue::Length {
            field: field.into(),
            expected: horizon,
            found: series.len(),
        });
    }
    if series.unit() != unit {
        issues.push(ValidationIssue::Unit {
            field: field.into(),
            expected: unit,
            found: series.unit(),
        });
    }
    // Series are finite by construction; the check stays for profiles built by hand.
    if let Some(hour) = series.values().iter().position(|v| !v.is_finite()) {
        issues.push(ValidationIssue::NonFinite {
            field: field.into(),
            hour: Some(hour),
        });
    }
}

/// Returns every invariant violation of `profile` against a horizon of `horizon` hours.
pub fn validate_profile(profile: &GridProfile, horizon: usize) -> Result<(), Vec<ValidationIssue>> {
    let mut issues = Vec::new();
    check_series(
        &mut issues,
        "spot_price",
        &profile.spot_price,
        Unit::UsdPerKwh,
        horizon,
    );
    check_series(&mut issues, "mef", &profile.mef, Unit::KgCo2ePerKwh, horizon);
    check_series(&mut issues, "aef", &profile.aef, Unit::KgCo2ePerKwh, horizon);
    if !(0.0..=1.0).contains(&profile.arpp) {
        issues.push(ValidationIssue::OutOfRange {
            field: "arpp".into(),
            value: profile.arpp,
        });
    }
    if !(profile.ef_location.is_finite() && profile.ef_location >= 0.0) {
        issues.push(ValidationIssue::OutOfRange {
            field: "ef_location".into(),
            value: profile.ef_location,
        });
    }
    if !(profile.rmf.is_finite() && profile.rmf >= 0.0) {
        issues.push(ValidationIssue::OutOfRange {
            field: "rmf".into(),
            value: profile.rmf,
        });
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(issues)
    }
}

/// A zone's grid data together with the reference RE generation at the site.
#[derive(Debug, Clone, PartialEq)]
pub struct Zone {
    pub grid: GridProfile,
    /// kW produced by the reference wind farm.
    pub ref_wind: HourlySeries,
    /// kW produced by the reference PV field.
    pub ref_pv: HourlySeries,
}

impl Zone {
    pub fn horizon(&self) -> usize {
        self.grid.spot_price.len()
    }

    pub fn validate(&self, horizon: usize) -> Result<(), Vec<ValidationIssue>> {
        let mut issues = validate_profile(&self.grid, horizon).err().unwrap_or_default();
        check_series(&mut issues, "wind_ref_kw", &self.ref_wind, Unit::Kw, horizon);
        check_series(&mut issues, "pv_ref_kw", &self.ref_pv, Unit::Kw, horizon);
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }
}

pub type ZoneLibrary = BTreeMap<String, Zone>;

/// Techno-economic constants of the plant. Defaults are the published
/// base-case values (2023 costs converted at 0.7 USD/AUD).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlantParameters {
    pub eta_el: f64,
    /// kWh/kg
    pub hhv: f64,
    pub load_kg_per_h: f64,
    /// kWh/kg, pipeline compressor.
    pub mu_comp1: f64,
    /// kWh/kg, storage compressor when storing in pipeline.
    pub mu_comp2_pipeline: f64,
    /// kWh/kg, storage compressor when storing in a lined rock cavern.
    pub mu_comp2_lrc: f64,
    /// USD/kW
    pub capex_el: f64,
    pub capex_wind: f64,
    pub capex_pv: f64,
    /// USD/kW/yr
    pub fom_el: f64,
    pub fom_wind: f64,
    pub fom_pv: f64,
    /// USD/kg H2
    pub vom_el: f64,
    /// USD/kWh
    pub ts_fee: f64,
    pub interest: f64,
    pub lifetime_years: u32,
    pub c_ref_wind_kw: f64,
    pub c_ref_pv_kw: f64,
    pub storage_tech_threshold_kg: f64,
}

impl Default for PlantParameters {
    fn default() -> Self {
        Self {
            eta_el: 0.70,
            hhv: 39.4,
            load_kg_per_h: 180.0,
            mu_comp1: 0.83,
            mu_comp2_pipeline: 0.83,
            mu_comp2_lrc: 1.24,
            capex_el: 1343.3,
            capex_wind: 2126.6,
            capex_pv: 1068.2,
            fom_el: 37.4,
            fom_wind: 17.5,
            fom_pv: 11.9,
            vom_el: 0.02,
            ts_fee: 0.007,
            interest: 0.06,
            lifetime_years: 25,
            c_ref_wind_kw: 320_000.0,
            c_ref_pv_kw: 1_000.0,
            storage_tech_threshold_kg: 21_742.0,
        }
    }
}

impl PlantParameters {
    /// Electricity drawn per kg delivered straight to the pipeline (kWh/kg).
    pub fn direct_path_kwh_per_kg(&self) -> f64 {
        self.hhv / self.eta_el + self.mu_comp1
    }

    pub fn validate(&self) -> Result<(), Vec<ValidationIssue>> {
        let mut issues = Vec::new();
        let mut need = |field: &str, value: f64, ok: bool| {
            if !(value.is_finite() && ok) {
                issues.push(ValidationIssue::OutOfRange {
                    field: field.into(),
                    value,
                });
            }
        };
        need("eta_el", self.eta_el, self.eta_el > 0.0 && self.eta_el <= 1.0);
        need("hhv", self.hhv, self.hhv > 0.0);
        need("load_kg_per_h", self.load_kg_per_h, self.load_kg_per_h >= 0.0);
        for (field, value) in [
            ("mu_comp1", self.mu_comp1),
            ("mu_comp2_pipeline", self.mu_comp2_pipeline),
            ("mu_comp2_lrc", self.mu_comp2_lrc),
            ("capex_el", self.capex_el),
            ("capex_wind", self.capex_wind),
            ("capex_pv", self.capex_pv),
            ("fom_el", self.fom_el),
            ("fom_wind", self.fom_wind),
            ("fom_pv", self.fom_pv),
            ("vom_el", self.vom_el),
            ("ts_fee", self.ts_fee),
        ] {
            need(field, value, value >= 0.0);
        }
        need("interest", self.interest, self.interest > 0.0);
        need(
            "lifetime_years",
            f64::from(self.lifetime_years),
            self.lifetime_years >= 1,
        );
        need("c_ref_wind_kw", self.c_ref_wind_kw, self.c_ref_wind_kw > 0.0);
        need("c_ref_pv_kw", self.c_ref_pv_kw, self.c_ref_pv_kw > 0.0);
        need(
            "storage_tech_threshold_kg",
            self.storage_tech_threshold_kg,
            self.storage_tech_threshold_kg > 0.0,
        );
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }
}

/// Sizing freedom of a single component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum CapacityBound {
    Fixed { fixed: f64 },
    Free { lower: f64, upper: f64 },
}

impl CapacityBound {
    pub fn fixed(value: f64) -> Self {
        CapacityBound::Fixed { fixed: value }
    }

    pub fn free(lower: f64, upper: f64) -> Self {
        CapacityBound::Free { lower, upper }
    }

    /// `(lower, upper)` bounds for the LP column.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            CapacityBound::Fixed { fixed } => (fixed, fixed),
            CapacityBound::Free { lower, upper } => (lower, upper),
        }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            CapacityBound::Fixed { fixed } => fixed.is_finite() && fixed >= 0.0,
            CapacityBound::Free { lower, upper } => {
                lower.is_finite() && lower >= 0.0 && lower <= upper && !upper.is_nan()
            }
        }
    }
}

/// Default upper bound on wind, PV and electrolyser size (kW).
pub const DEFAULT_MAX_CAPACITY_KW: f64 = 50_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacitySpec {
    pub wind_kw: CapacityBound,
    pub pv_kw: CapacityBound,
    pub electrolyser_kw: CapacityBound,
    pub storage_kg: CapacityBound,
}

impl Default for CapacitySpec {
    fn default() -> Self {
        Self {
            wind_kw: CapacityBound::free(0.0, DEFAULT_MAX_CAPACITY_KW),
            pv_kw: CapacityBound::free(0.0, DEFAULT_MAX_CAPACITY_KW),
            electrolyser_kw: CapacityBound::free(0.0, DEFAULT_MAX_CAPACITY_KW),
            storage_kg: CapacityBound::free(0.0, f64::INFINITY),
        }
    }
}

impl CapacitySpec {
    pub fn validate(&self) -> Result<(), Vec<ValidationIssue>> {
        let issues: Vec<_> = [
            ("wind_kw", self.wind_kw),
            ("pv_kw", self.pv_kw),
            ("electrolyser_kw", self.electrolyser_kw),
            ("storage_kg", self.storage_kg),
        ]
        .into_iter()
        .filter(|(_, b)| !b.is_valid())
        .map(|(field, b)| ValidationIssue::OutOfRange {
            field: field.into(),
            value: b.bounds().0,
        })
        .collect();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridMode {
    OffGrid,
    SellOnly,
    GridBuySell,
}

/// Interval over which exports must cover imports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TcInterval {
    Hourly,
    Daily,
    Monthly,
    Yearly,
}

/// Where the RE is located relative to the electrolyser.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Geo {
    CoLocated { zone: String },
    Split { sell_zone: String, buy_zone: String },
}

impl Geo {
    /// Zone whose prices and factors apply to imports.
    pub fn buy_zone(&self) -> &str {
        match self {
            Geo::CoLocated { zone } => zone,
            Geo::Split { buy_zone, .. } => buy_zone,
        }
    }

    /// Zone hosting the RE and receiving exports.
    pub fn sell_zone(&self) -> &str {
        match self {
            Geo::CoLocated { zone } => zone,
            Geo::Split { sell_zone, .. } => sell_zone,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("scenario {0}: off-grid mode cannot carry a temporal-correlation interval")]
    OffGridWithTc(String),
    #[error("scenario {0}: off-grid mode cannot use a split geography")]
    OffGridSplit(String),
    #[error("scenario {0}: off-grid mode cannot carry an emission cap")]
    OffGridEmissionCap(String),
    #[error("scenario {name}: {issue}")]
    Capacity { name: String, issue: ValidationIssue },
    #[error("scenario {name}: {field} must be finite")]
    NonFinite { name: String, field: &'static str },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub mode: GridMode,
    pub tc_interval: Option<TcInterval>,
    /// kgCO2e per kg H2, applied to the MEF-tracked emissions.
    pub ei_mef_cap: Option<f64>,
    pub capex_cap_usd: Option<f64>,
    pub geo: Geo,
    pub capacities: CapacitySpec,
}

/// Names of the built-in scenarios, in suite order after the off-grid prerequisite.
pub const PRESET_SCENARIOS: [&str; 8] = [
    "off-grid",
    "sell-only",
    "hourly",
    "daily",
    "monthly",
    "yearly",
    "flexible",
    "ei-mef-zero",
];

impl ScenarioSpec {
    pub fn new(name: impl Into<String>, mode: GridMode, zone: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            mode,
            tc_interval: None,
            ei_mef_cap: None,
            capex_cap_usd: None,
            geo: Geo::CoLocated { zone: zone.into() },
            capacities: CapacitySpec::default(),
        }
    }

    /// Built-in scenario by name, co-located in `zone`.
    pub fn preset(name: &str, zone: &str) -> Option<Self> {
        let tc = |interval| {
            let mut s = Self::new(name, GridMode::GridBuySell, zone);
            s.tc_interval = Some(interval);
            s
        };
        let spec = match name {
            "off-grid" => Self::new(name, GridMode::OffGrid, zone),
            "sell-only" => Self::new(name, GridMode::SellOnly, zone),
            "hourly" => tc(TcInterval::Hourly),
            "daily" => tc(TcInterval::Daily),
            "monthly" => tc(TcInterval::Monthly),
            "yearly" => tc(TcInterval::Yearly),
            "flexible" => Self::new(name, GridMode::GridBuySell, zone),
            "ei-mef-zero" => {
                let mut s = Self::new(name, GridMode::GridBuySell, zone);
                s.ei_mef_cap = Some(0.0);
                s
            }
            _ => return None,
        };
        Some(spec)
    }

    pub fn with_capacities(mut self, capacities: CapacitySpec) -> Self {
        self.capacities = capacities;
        self
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.mode == GridMode::OffGrid {
            if self.tc_interval.is_some() {
                return Err(ScenarioError::OffGridWithTc(self.name.clone()));
            }
            if matches!(self.geo, Geo::Split { .. }) {
                return Err(ScenarioError::OffGridSplit(self.name.clone()));
            }
            if self.ei_mef_cap.is_some() {
                return Err(ScenarioError::OffGridEmissionCap(self.name.clone()));
            }
        }
        if self.ei_mef_cap.is_some_and(|c| !c.is_finite()) {
            return Err(ScenarioError::NonFinite {
                name: self.name.clone(),
                field: "ei_mef_cap",
            });
        }
        if self.capex_cap_usd.is_some_and(f64::is_nan) {
            return Err(ScenarioError::NonFinite {
                name: self.name.clone(),
                field: "capex_cap_usd",
            });
        }
        self.capacities
            .validate()
            .map_err(|mut issues| ScenarioError::Capacity {
                name: self.name.clone(),
                issue: issues.remove(0),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(len: usize) -> GridProfile {
        GridProfile {
            zone_id: "QLD".into(),
            spot_price: HourlySeries::constant(0.05, len, Unit::UsdPerKwh),
            mef: HourlySeries::constant(0.5, len, Unit::KgCo2ePerKwh),
            aef: HourlySeries::constant(0.6, len, Unit::KgCo2ePerKwh),
            ef_location: 0.71,
            arpp: 0.1872,
            rmf: 0.81,
        }
    }

    #[test]
    fn convert_price_examples() {
        assert!((convert_price(95.0, 0.7).unwrap() - 0.0665).abs() < 1e-15);
        assert_eq!(convert_price(0.0, 0.7).unwrap(), 0.0);
        assert!((convert_price(-50.0, 0.7).unwrap() + 0.035).abs() < 1e-15);
        assert!(convert_price(f64::NAN, 0.7).is_err());
        assert!(convert_price(10.0, 0.0).is_err());
    }

    #[test]
    fn validate_profile_examples() {
        assert!(validate_profile(&profile(8760), 8760).is_ok());

        let mut short = profile(8760);
        short.mef = HourlySeries::constant(0.5, 8759, Unit::KgCo2ePerKwh);
        let issues = validate_profile(&short, 8760).unwrap_err();
        assert_eq!(
            issues,
            vec![ValidationIssue::Length {
                field: "mef".into(),
                expected: 8760,
                found: 8759
            }]
        );

        let mut bad = profile(24);
        bad.arpp = 1.2;
        bad.aef = HourlySeries::constant(0.6, 24, Unit::Kw);
        let issues = validate_profile(&bad, 24).unwrap_err();
        assert_eq!(issues.len(), 2);
        assert!(issues
            .iter()
            .any(|i| matches!(i, ValidationIssue::OutOfRange { field, .. } if field == "arpp")));
    }

    #[test]
    fn series_reject_non_finite_and_unit_mixing() {
        assert!(HourlySeries::new(vec![1.0, f64::INFINITY], Unit::Kw).is_err());
        let kw = HourlySeries::constant(1.0, 3, Unit::Kw);
        let price = HourlySeries::constant(1.0, 3, Unit::UsdPerKwh);
        assert!(matches!(
            kw.checked_add(&price),
            Err(SeriesError::UnitMismatch { .. })
        ));
        let short = HourlySeries::constant(1.0, 2, Unit::Kw);
        assert!(matches!(
            kw.checked_sub(&short),
            Err(SeriesError::LengthMismatch { .. })
        ));
        assert_eq!(kw.checked_add(&kw).unwrap().values(), &[2.0, 2.0, 2.0]);
    }

    #[test]
    fn off_grid_scenarios_reject_grid_policies() {
        let mut s = ScenarioSpec::preset("off-grid", "QLD").unwrap();
        assert!(s.validate().is_ok());
        s.tc_interval = Some(TcInterval::Daily);
        assert!(matches!(s.validate(), Err(ScenarioError::OffGridWithTc(_))));
        let mut s = ScenarioSpec::preset("off-grid", "QLD").unwrap();
        s.ei_mef_cap = Some(0.0);
        assert!(s.validate().is_err());
        let mut s = ScenarioSpec::preset("off-grid", "QLD").unwrap();
        s.geo = Geo::Split {
            sell_zone: "TAS".into(),
            buy_zone: "NSW".into(),
        };
        assert!(s.validate().is_err());
    }

    #[test]
    fn capacity_bounds() {
        assert_eq!(CapacityBound::fixed(5.0).bounds(), (5.0, 5.0));
        assert!(!CapacityBound::free(1.0, 0.0).is_valid());
        assert!(!CapacityBound::fixed(-1.0).is_valid());
        assert!(CapacityBound::free(0.0, f64::INFINITY).is_valid());
        for name in PRESET_SCENARIOS {
            assert!(ScenarioSpec::preset(name, "Z").unwrap().validate().is_ok());
        }
    }

    #[test]
    fn default_parameters_are_valid() {
        let p = PlantParameters::default();
        assert!(p.validate().is_ok());
        assert!((p.direct_path_kwh_per_kg() - 57.115_714_285_714_28).abs() < 1e-12);
    }
}
