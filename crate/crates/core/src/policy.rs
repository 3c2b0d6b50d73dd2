//! Policy constraints layered on top of the plant model.

use std::ops::Range;

use thiserror::Error;

use crate::lp::{LinearExpr, LpError, LpModel, Sense};
use crate::plant::PlantVars;
use crate::types::{GridProfile, HourlySeries, PlantParameters, SeriesError, TcInterval, Unit};
use crate::HOURS_PER_YEAR;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolicyError {
    #[error("interval partition is empty")]
    EmptyPartition,
    #[error("interval partition does not tile [0, {horizon}): {detail}")]
    BadPartition { horizon: usize, detail: String },
    #[error("partition covers {found} hours but the model has {expected}")]
    HorizonMismatch { expected: usize, found: usize },
    #[error("{field}: {source}")]
    Series {
        field: &'static str,
        source: SeriesError,
    },
    #[error(transparent)]
    Lp(#[from] LpError),
}

const MONTH_DAYS: [usize; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
/// Block length used for "monthly" intervals on synthetic horizons.
pub const SYNTHETIC_MONTH_HOURS: usize = 730;

/// Contiguous, ordered intervals tiling `[0, horizon)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    intervals: Vec<Range<usize>>,
}

impl IntervalPartition {
    pub fn new(intervals: Vec<Range<usize>>, horizon: usize) -> Result<Self, PolicyError> {
        if intervals.is_empty() {
            return Err(PolicyError::EmptyPartition);
        }
        let mut cursor = 0;
        for r in &intervals {
            if r.start != cursor || r.end <= r.start {
                return Err(PolicyError::BadPartition {
                    horizon,
                    detail: format!(
                        "interval {}..{} does not continue at hour {cursor}",
                        r.start, r.end
                    ),
                });
            }
            cursor = r.end;
        }
        if cursor != horizon {
            return Err(PolicyError::BadPartition {
                horizon,
                detail: format!("coverage ends at {cursor}"),
            });
        }
        Ok(Self { intervals })
    }

    fn blocks(horizon: usize, len: usize) -> Self {
        let intervals = (0..horizon)
            .step_by(len)
            .map(|s| s..(s + len).min(horizon))
            .collect();
        Self { intervals }
    }

    pub fn hourly(horizon: usize) -> Self {
        Self::blocks(horizon, 1)
    }

    pub fn daily(horizon: usize) -> Self {
        Self::blocks(horizon, 24)
    }

    /// Calendar months of a non-leap year when the horizon is exactly one
    /// year, otherwise equal 730-hour blocks.
    pub fn monthly(horizon: usize) -> Self {
        if horizon == HOURS_PER_YEAR {
            let mut start = 0;
            let intervals = MONTH_DAYS
                .iter()
                .map(|d| {
                    let r = start..start + d * 24;
                    start = r.end;
                    r
                })
                .collect();
            Self { intervals }
        } else {
            Self::blocks(horizon, SYNTHETIC_MONTH_HOURS)
        }
    }

    /// The whole horizon, or one block per 8760 hours on multi-year horizons.
    pub fn yearly(horizon: usize) -> Self {
        Self::blocks(horizon, HOURS_PER_YEAR)
    }

    pub fn for_interval(interval: TcInterval, horizon: usize) -> Self {
        match interval {
            TcInterval::Hourly => Self::hourly(horizon),
            TcInterval::Daily => Self::daily(horizon),
            TcInterval::Monthly => Self::monthly(horizon),
            TcInterval::Yearly => Self::yearly(horizon),
        }
    }

    pub fn intervals(&self) -> &[Range<usize>] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn horizon(&self) -> usize {
        self.intervals.last().map_or(0, |r| r.end)
    }
}

/// Adds `Σ_{t∈I} export(t) − import(t) ≥ 0` for every interval `I`.
pub fn apply_temporal_correlation(
    model: &mut LpModel,
    vars: &PlantVars,
    partition: &IntervalPartition,
) -> Result<(), PolicyError> {
    if partition.is_empty() {
        return Err(PolicyError::EmptyPartition);
    }
    if partition.horizon() != vars.horizon() {
        return Err(PolicyError::HorizonMismatch {
            expected: vars.horizon(),
            found: partition.horizon(),
        });
    }
    for (k, interval) in partition.intervals().iter().enumerate() {
        let mut expr = LinearExpr::new();
        for t in interval.clone() {
            expr.add_term(vars.export[t], 1.0).add_term(vars.import[t], -1.0);
        }
        model.add_constraint(format!("tc({k})"), expr, Sense::Ge, 0.0)?;
    }
    Ok(())
}

fn check_factor(series: &HourlySeries, horizon: usize, field: &'static str) -> Result<(), PolicyError> {
    let wrap = |source| PolicyError::Series { field, source };
    series.expect_unit(Unit::KgCo2ePerKwh).map_err(wrap)?;
    series.expect_len(horizon).map_err(wrap)
}

/// Caps MEF-tracked emissions: `Σ import·mef_buy − export·mef_sell ≤ cap · h2`.
pub fn apply_emission_cap(
    model: &mut LpModel,
    vars: &PlantVars,
    mef_buy: &HourlySeries,
    mef_sell: &HourlySeries,
    cap_kg_per_kg_h2: f64,
    annual_h2_kg: f64,
) -> Result<(), PolicyError> {
    let horizon = vars.horizon();
    check_factor(mef_buy, horizon, "mef_buy")?;
    check_factor(mef_sell, horizon, "mef_sell")?;
    let mut expr = LinearExpr::new();
    for t in 0..horizon {
        expr.add_term(vars.import[t], mef_buy.values()[t])
            .add_term(vars.export[t], -mef_sell.values()[t]);
    }
    model.add_constraint("ei_mef_cap", expr, Sense::Le, cap_kg_per_kg_h2 * annual_h2_kg)?;
    Ok(())
}

/// Total (undiscounted) CAPEX as a linear expression of the capacities.
pub fn capex_expr(vars: &PlantVars, params: &PlantParameters, storage_unit_cost: f64) -> LinearExpr {
    LinearExpr::term(vars.c_el, params.capex_el)
        .with(vars.c_wind, params.capex_wind)
        .with(vars.c_pv, params.capex_pv)
        .with(vars.c_store, storage_unit_cost)
}

/// Limits total CAPEX (storage priced at `storage_unit_cost` USD/kg) to `cap_usd`.
/// An infinite cap adds nothing.
pub fn apply_capex_cap(
    model: &mut LpModel,
    vars: &PlantVars,
    params: &PlantParameters,
    storage_unit_cost: f64,
    cap_usd: f64,
) -> Result<(), PolicyError> {
    if cap_usd == f64::INFINITY {
        return Ok(());
    }
    model.add_constraint(
        "capex_cap",
        capex_expr(vars, params, storage_unit_cost),
        Sense::Le,
        cap_usd,
    )?;
    Ok(())
}

/// Rewires the plant for RE located in a different zone: the RE bus feeds only
/// exports (and curtailment) into the sell grid, and the plant bus is fed only
/// by imports from the buy grid.
pub fn wire_two_grid(
    model: &mut LpModel,
    vars: &PlantVars,
    sell_zone: &GridProfile,
    buy_zone: &GridProfile,
) -> Result<(), PolicyError> {
    let horizon = vars.horizon();
    for (field, s) in [
        ("sell_zone.spot_price", &sell_zone.spot_price),
        ("buy_zone.spot_price", &buy_zone.spot_price),
    ] {
        let wrap = |source| PolicyError::Series { field, source };
        s.expect_unit(Unit::UsdPerKwh).map_err(wrap)?;
        s.expect_len(horizon).map_err(wrap)?;
    }
    for t in 0..horizon {
        let plant = LinearExpr::from(vars.e_el[t])
            .with(vars.e_comp1[t], 1.0)
            .with(vars.e_comp2[t], 1.0)
            .with(vars.import[t], -1.0);
        model.replace_constraint(vars.balance[t], plant, Sense::Eq, 0.0)?;
        let re = LinearExpr::from(vars.export[t]).with(vars.curtail[t], 1.0) - vars.generation_expr(t);
        model.replace_constraint(vars.curtail_limit[t], re, Sense::Eq, 0.0)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions() {
        assert_eq!(IntervalPartition::hourly(3).intervals(), &[0..1, 1..2, 2..3]);
        assert_eq!(IntervalPartition::daily(48).intervals(), &[0..24, 24..48]);
        assert_eq!(IntervalPartition::daily(30).intervals(), &[0..24, 24..30]);
        assert_eq!(IntervalPartition::yearly(8760).intervals(), &[0..8760]);
        assert_eq!(IntervalPartition::yearly(168).intervals(), &[0..168]);
        let months = IntervalPartition::monthly(8760);
        assert_eq!(months.len(), 12);
        assert_eq!(months.intervals()[1], 744..1416);
        assert_eq!(months.horizon(), 8760);
        assert_eq!(
            IntervalPartition::monthly(1500).intervals(),
            &[0..730, 730..1460, 1460..1500]
        );
    }

    #[test]
    fn partition_validation() {
        assert_eq!(
            IntervalPartition::new(vec![], 5),
            Err(PolicyError::EmptyPartition)
        );
        assert!(IntervalPartition::new(vec![0..2, 3..5], 5).is_err());
        assert!(IntervalPartition::new(vec![0..2, 2..4], 5).is_err());
        assert!(IntervalPartition::new(vec![0..3, 2..5], 5).is_err());
        assert!(IntervalPartition::new(vec![0..2, 2..5], 5).is_ok());
    }
}
