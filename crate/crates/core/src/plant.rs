//! Plant variables and physical constraints.
//!
//! Per hour the model carries the electricity balance at the plant bus, the
//! electrolyser conversion, the split of hydrogen between the pipeline and
//! storage compressors, the fixed hydrogen load, compressor electricity use and
//! the storage level recursion. Capacities are decision variables (or pinned by
//! a [`CapacitySpec`]); RE generation scales linearly with installed capacity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{ConstraintId, LinearExpr, LpError, LpModel, LpSolution, Sense, VarId};
use crate::types::{CapacitySpec, GridMode, HourlySeries, PlantParameters, SeriesError, Unit};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlantError {
    #[error("{field}: {source}")]
    Series {
        field: &'static str,
        source: SeriesError,
    },
    #[error("invalid capacity specification for {0}")]
    Capacity(&'static str),
    #[error("horizon must be at least one hour")]
    EmptyHorizon,
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Handles to every plant column, by hour where applicable.
#[derive(Debug, Clone)]
pub struct PlantVars {
    pub e_el: Vec<VarId>,
    pub e_comp1: Vec<VarId>,
    pub e_comp2: Vec<VarId>,
    /// Electricity sold to the grid (kW).
    pub export: Vec<VarId>,
    /// Electricity bought from the grid (kW).
    pub import: Vec<VarId>,
    pub curtail: Vec<VarId>,
    pub h_el: Vec<VarId>,
    pub h_comp1: Vec<VarId>,
    pub h_comp2: Vec<VarId>,
    pub h_from_store: Vec<VarId>,
    pub soc: Vec<VarId>,
    pub c_wind: VarId,
    pub c_pv: VarId,
    pub c_el: VarId,
    pub c_store: VarId,
    pub soc0: VarId,
    /// Electricity balance row per hour.
    pub balance: Vec<ConstraintId>,
    /// Curtailment-limit row per hour.
    pub curtail_limit: Vec<ConstraintId>,
    /// Wind output per kW installed, per hour.
    pub wind_per_kw: Vec<f64>,
    /// PV output per kW installed, per hour.
    pub pv_per_kw: Vec<f64>,
}

impl PlantVars {
    pub fn horizon(&self) -> usize {
        self.e_el.len()
    }

    /// `gen_wind(t) + gen_pv(t)` as a linear expression of the capacities.
    pub fn generation_expr(&self, t: usize) -> LinearExpr {
        LinearExpr::term(self.c_wind, self.wind_per_kw[t]).with(self.c_pv, self.pv_per_kw[t])
    }

    /// Reads the plant's dispatch out of an optimal solution.
    pub fn dispatch(&self, sol: &LpSolution) -> Dispatch {
        let c_wind = sol.value(self.c_wind);
        let c_pv = sol.value(self.c_pv);
        Dispatch {
            gen_wind_kw: self.wind_per_kw.iter().map(|g| g * c_wind).collect(),
            gen_pv_kw: self.pv_per_kw.iter().map(|g| g * c_pv).collect(),
            e_el_kw: sol.values_of(&self.e_el),
            e_comp1_kw: sol.values_of(&self.e_comp1),
            e_comp2_kw: sol.values_of(&self.e_comp2),
            import_kw: sol.values_of(&self.import),
            export_kw: sol.values_of(&self.export),
            curtail_kw: sol.values_of(&self.curtail),
            h_el_kg: sol.values_of(&self.h_el),
            h_comp1_kg: sol.values_of(&self.h_comp1),
            h_comp2_kg: sol.values_of(&self.h_comp2),
            h_from_store_kg: sol.values_of(&self.h_from_store),
            soc_kg: sol.values_of(&self.soc),
            soc0_kg: sol.value(self.soc0),
        }
    }

    pub fn capacities(&self, sol: &LpSolution) -> Capacities {
        Capacities {
            wind_kw: sol.value(self.c_wind),
            pv_kw: sol.value(self.c_pv),
            electrolyser_kw: sol.value(self.c_el),
            storage_kg: sol.value(self.c_store),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capacities {
    pub wind_kw: f64,
    pub pv_kw: f64,
    pub electrolyser_kw: f64,
    pub storage_kg: f64,
}

/// Hourly flows of a solved plant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dispatch {
    pub gen_wind_kw: Vec<f64>,
    pub gen_pv_kw: Vec<f64>,
    pub e_el_kw: Vec<f64>,
    pub e_comp1_kw: Vec<f64>,
    pub e_comp2_kw: Vec<f64>,
    pub import_kw: Vec<f64>,
    pub export_kw: Vec<f64>,
    pub curtail_kw: Vec<f64>,
    pub h_el_kg: Vec<f64>,
    pub h_comp1_kg: Vec<f64>,
    pub h_comp2_kg: Vec<f64>,
    pub h_from_store_kg: Vec<f64>,
    pub soc_kg: Vec<f64>,
    pub soc0_kg: f64,
}

impl Dispatch {
    pub fn horizon(&self) -> usize {
        self.e_el_kw.len()
    }

    pub fn import_series(&self) -> HourlySeries {
        HourlySeries::new(self.import_kw.clone(), Unit::Kw).expect("solver values are finite")
    }

    pub fn export_series(&self) -> HourlySeries {
        HourlySeries::new(self.export_kw.clone(), Unit::Kw).expect("solver values are finite")
    }

    /// Largest absolute mismatch of the co-located electricity balance.
    pub fn max_balance_residual(&self) -> f64 {
        (0..self.horizon())
            .map(|t| {
                let uses = self.e_el_kw[t]
                    + self.e_comp1_kw[t]
                    + self.e_comp2_kw[t]
                    + self.export_kw[t]
                    + self.curtail_kw[t];
                let sources = self.gen_wind_kw[t] + self.gen_pv_kw[t] + self.import_kw[t];
                (uses - sources).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest absolute mismatch of the split-topology balances (plant bus fed
    /// only by imports, RE bus feeding only exports and curtailment).
    pub fn max_split_balance_residual(&self) -> f64 {
        (0..self.horizon())
            .map(|t| {
                let plant = self.e_el_kw[t] + self.e_comp1_kw[t] + self.e_comp2_kw[t] - self.import_kw[t];
                let re = self.gen_wind_kw[t] + self.gen_pv_kw[t] - self.export_kw[t] - self.curtail_kw[t];
                plant.abs().max(re.abs())
            })
            .fold(0.0, f64::max)
    }

    /// `Σ h_el − Σ load − (soc(T−1) − soc0)`.
    pub fn hydrogen_mass_residual(&self, load_kg_per_h: f64) -> f64 {
        let produced: f64 = self.h_el_kg.iter().sum();
        let delivered = load_kg_per_h * self.horizon() as f64;
        let stored = self.soc_kg.last().copied().unwrap_or(self.soc0_kg) - self.soc0_kg;
        produced - delivered - stored
    }
}

fn per_kw(
    series: &HourlySeries,
    reference_kw: f64,
    horizon: usize,
    field: &'static str,
) -> Result<Vec<f64>, PlantError> {
    let wrap = |source| PlantError::Series { field, source };
    series.expect_unit(Unit::Kw).map_err(wrap)?;
    series.expect_len(horizon).map_err(wrap)?;
    Ok(series.values().iter().map(|g| g / reference_kw).collect())
}

/// Builds the plant LP (without objective) over `horizon` hours.
///
/// `mu_comp2` is the storage compressor's specific consumption for the storage
/// technology currently assumed.
pub fn build_plant(
    params: &PlantParameters,
    ref_wind: &HourlySeries,
    ref_pv: &HourlySeries,
    caps: &CapacitySpec,
    mode: GridMode,
    horizon: usize,
    mu_comp2: f64,
) -> Result<(LpModel, PlantVars), PlantError> {
    if horizon == 0 {
        return Err(PlantError::EmptyHorizon);
    }
    let wind_per_kw = per_kw(ref_wind, params.c_ref_wind_kw, horizon, "ref_wind")?;
    let pv_per_kw = per_kw(ref_pv, params.c_ref_pv_kw, horizon, "ref_pv")?;
    for (name, bound) in [
        ("wind_kw", caps.wind_kw),
        ("pv_kw", caps.pv_kw),
        ("electrolyser_kw", caps.electrolyser_kw),
        ("storage_kg", caps.storage_kg),
    ] {
        if !bound.is_valid() {
            return Err(PlantError::Capacity(name));
        }
    }

    let mut m = LpModel::new();
    let cap = |m: &mut LpModel, name: &str, b: crate::types::CapacityBound| {
        let (lo, hi) = b.bounds();
        m.add_named_variable(name, lo, hi)
    };
    let c_wind = cap(&mut m, "c_wind", caps.wind_kw)?;
    let c_pv = cap(&mut m, "c_pv", caps.pv_kw)?;
    let c_el = cap(&mut m, "c_el", caps.electrolyser_kw)?;
    let c_store = cap(&mut m, "c_store", caps.storage_kg)?;
    let soc0 = m.add_named_variable("soc0", 0.0, f64::INFINITY)?;

    let import_hi = if mode == GridMode::GridBuySell {
        f64::INFINITY
    } else {
        0.0
    };
    let export_hi = if mode == GridMode::OffGrid {
        0.0
    } else {
        f64::INFINITY
    };

    let mut series = |prefix: &str, hi: f64| -> Result<Vec<VarId>, LpError> {
        (0..horizon)
            .map(|t| m.add_named_variable(format!("{prefix}({t})"), 0.0, hi))
            .collect()
    };
    let e_el = series("e_el", f64::INFINITY)?;
    let e_comp1 = series("e_comp1", f64::INFINITY)?;
    let e_comp2 = series("e_comp2", f64::INFINITY)?;
    let import = series("import", import_hi)?;
    let export = series("export", export_hi)?;
    let curtail = series("curtail", f64::INFINITY)?;
    let h_el = series("h_el", f64::INFINITY)?;
    let h_comp1 = series("h_comp1", f64::INFINITY)?;
    let h_comp2 = series("h_comp2", f64::INFINITY)?;
    let h_from_store = series("h_from_store", f64::INFINITY)?;
    let soc = series("soc", f64::INFINITY)?;

    let yield_kg_per_kwh = params.eta_el / params.hhv;
    let mut balance = Vec::with_capacity(horizon);
    let mut curtail_limit = Vec::with_capacity(horizon);
    for t in 0..horizon {
        let generation = LinearExpr::term(c_wind, wind_per_kw[t]).with(c_pv, pv_per_kw[t]);
        let uses = LinearExpr::from(e_el[t])
            .with(e_comp1[t], 1.0)
            .with(e_comp2[t], 1.0)
            .with(export[t], 1.0)
            .with(curtail[t], 1.0)
            .with(import[t], -1.0);
        balance.push(m.add_constraint(format!("balance({t})"), uses - generation.clone(), Sense::Eq, 0.0)?);
        curtail_limit.push(m.add_constraint(
            format!("curtail_limit({t})"),
            LinearExpr::from(curtail[t]) - generation,
            Sense::Le,
            0.0,
        )?);

        m.add_constraint(
            format!("electrolysis({t})"),
            LinearExpr::from(h_el[t]).with(e_el[t], -yield_kg_per_kwh),
            Sense::Eq,
            0.0,
        )?;
        m.add_constraint(
            format!("h2_split({t})"),
            LinearExpr::from(h_el[t])
                .with(h_comp1[t], -1.0)
                .with(h_comp2[t], -1.0),
            Sense::Eq,
            0.0,
        )?;
        m.add_constraint(
            format!("load({t})"),
            LinearExpr::from(h_comp1[t]).with(h_from_store[t], 1.0),
            Sense::Eq,
            params.load_kg_per_h,
        )?;
        m.add_constraint(
            format!("comp1({t})"),
            LinearExpr::from(e_comp1[t]).with(h_comp1[t], -params.mu_comp1),
            Sense::Eq,
            0.0,
        )?;
        m.add_constraint(
            format!("comp2({t})"),
            LinearExpr::from(e_comp2[t]).with(h_comp2[t], -mu_comp2),
            Sense::Eq,
            0.0,
        )?;
        let previous = if t == 0 { soc0 } else { soc[t - 1] };
        m.add_constraint(
            format!("storage({t})"),
            LinearExpr::from(soc[t])
                .with(previous, -1.0)
                .with(h_comp2[t], -1.0)
                .with(h_from_store[t], 1.0),
            Sense::Eq,
            0.0,
        )?;
        m.add_constraint(
            format!("el_cap({t})"),
            LinearExpr::from(e_el[t]).with(c_el, -1.0),
            Sense::Le,
            0.0,
        )?;
        m.add_constraint(
            format!("store_cap({t})"),
            LinearExpr::from(soc[t]).with(c_store, -1.0),
            Sense::Le,
            0.0,
        )?;
    }
    m.add_constraint(
        "soc0_cap",
        LinearExpr::from(soc0).with(c_store, -1.0),
        Sense::Le,
        0.0,
    )?;
    m.add_constraint(
        "cyclic",
        LinearExpr::from(soc[horizon - 1]).with(soc0, -1.0),
        Sense::Eq,
        0.0,
    )?;

    let vars = PlantVars {
        e_el,
        e_comp1,
        e_comp2,
        export,
        import,
        curtail,
        h_el,
        h_comp1,
        h_comp2,
        h_from_store,
        soc,
        c_wind,
        c_pv,
        c_el,
        c_store,
        soc0,
        balance,
        curtail_limit,
        wind_per_kw,
        pv_per_kw,
    };
    Ok((m, vars))
}
