//! Cost mathematics and the plant optimisation driver.
//!
//! The storage unit cost falls with capacity, which an LP cannot express
//! directly. [`optimize_plant`] therefore prices storage at a fixed unit cost,
//! solves, re-prices at the optimal capacity (switching technology across the
//! pipeline/cavern threshold) and repeats until the price settles.
//!
//! Fixed costs are annual. When the horizon is shorter than a year they are
//! pro-rated by `T / 8760` so that every cost term refers to the same period
//! as the hydrogen output `load × T`. For `T = 8760` this is the plain annual
//! LCOH. The objective minimises total cost rather than the LCOH ratio; the
//! two are equivalent because hydrogen output is fixed by the constant load.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lp::{write_lp, HighsSolver, LinearExpr, LpModel, LpSolution, LpSolver, LpStatus};
use crate::plant::{build_plant, Capacities, Dispatch, PlantError, PlantVars};
use crate::policy::{
    apply_capex_cap, apply_emission_cap, apply_temporal_correlation, wire_two_grid, IntervalPartition,
    PolicyError,
};
use crate::types::{
    Geo, HourlySeries, PlantParameters, ScenarioError, ScenarioSpec, SeriesError, Unit, ValidationIssue,
    Zone, ZoneLibrary,
};
use crate::HOURS_PER_YEAR;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("interest rate must be positive, got {0}")]
    Interest(f64),
    #[error("lifetime must be at least one year")]
    Lifetime,
    #[error("storage capacity must be positive, got {0} kg")]
    StorageCapacity(f64),
}

/// Capital recovery factor `i(1+i)^n / ((1+i)^n − 1)`.
pub fn crf(interest: f64, years: u32) -> Result<f64, DomainError> {
    if !(interest.is_finite() && interest > 0.0) {
        return Err(DomainError::Interest(interest));
    }
    if years == 0 {
        return Err(DomainError::Lifetime);
    }
    let growth = (1.0 + interest).powi(years as i32);
    Ok(interest * growth / (growth - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StorageTech {
    /// Buried pipeline at 100 bar.
    Pipeline,
    /// Lined rock cavern at 150 bar.
    Lrc,
}

impl StorageTech {
    pub fn mu_comp2(self, params: &PlantParameters) -> f64 {
        match self {
            StorageTech::Pipeline => params.mu_comp2_pipeline,
            StorageTech::Lrc => params.mu_comp2_lrc,
        }
    }
}

impl fmt::Display for StorageTech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StorageTech::Pipeline => "pipeline",
            StorageTech::Lrc => "lrc",
        })
    }
}

/// Installed storage cost in USD per kg of capacity.
pub fn storage_unit_cost(capacity_kg: f64, tech: StorageTech) -> Result<f64, DomainError> {
    if !(capacity_kg.is_finite() && capacity_kg > 0.0) {
        return Err(DomainError::StorageCapacity(capacity_kg));
    }
    let x = (capacity_kg / 1000.0).log10();
    let log_cost = match tech {
        StorageTech::Pipeline => -0.0285 * x + 2.7853,
        StorageTech::Lrc => 0.217956 * x * x - 1.575209 * x + 4.463930,
    };
    Ok(10f64.powf(log_cost))
}

/// Pipeline below the threshold, cavern at or above it.
pub fn select_storage_tech(capacity_kg: f64, threshold_kg: f64) -> StorageTech {
    if capacity_kg < threshold_kg {
        StorageTech::Pipeline
    } else {
        StorageTech::Lrc
    }
}

/// Net grid cost `Σ import·(p_buy + ts) − export·p_sell` in USD.
pub fn electricity_cost(
    import: &HourlySeries,
    export: &HourlySeries,
    p_buy: &HourlySeries,
    p_sell: &HourlySeries,
    ts_fee: f64,
) -> Result<f64, SeriesError> {
    let t = import.len();
    import.expect_unit(Unit::Kw)?;
    export.expect_unit(Unit::Kw)?;
    p_buy.expect_unit(Unit::UsdPerKwh)?;
    p_sell.expect_unit(Unit::UsdPerKwh)?;
    for s in [export, p_buy, p_sell] {
        s.expect_len(t)?;
    }
    Ok((0..t)
        .map(|h| import.values()[h] * (p_buy.values()[h] + ts_fee) - export.values()[h] * p_sell.values()[h])
        .sum())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ComponentCosts {
    pub electrolyser: f64,
    pub wind: f64,
    pub pv: f64,
    pub storage: f64,
}

impl ComponentCosts {
    pub fn total(&self) -> f64 {
        self.electrolyser + self.wind + self.pv + self.storage
    }
}

/// Cost terms over the modelled horizon, all in USD.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    /// Net purchases minus sales; negative when the plant earns from the grid.
    pub grid_electricity_usd: f64,
    /// CRF-annualised CAPEX, pro-rated to the horizon.
    pub capex_annualized_usd: ComponentCosts,
    /// FOM pro-rated to the horizon; the electrolyser entry also holds VOM.
    pub om_usd: ComponentCosts,
    pub annual_h2_kg: f64,
    pub lcoh_usd_per_kg: f64,
    /// `T / 8760`.
    pub horizon_fraction: f64,
}

impl CostBreakdown {
    pub fn total_usd(&self) -> f64 {
        self.grid_electricity_usd + self.capex_annualized_usd.total() + self.om_usd.total()
    }

    pub fn compute(
        params: &PlantParameters,
        caps: &Capacities,
        storage_unit_cost: f64,
        grid_electricity_usd: f64,
        horizon: usize,
    ) -> Result<Self, DomainError> {
        let f = horizon as f64 / HOURS_PER_YEAR as f64;
        let crf = crf(params.interest, params.lifetime_years)?;
        let annual_h2_kg = params.load_kg_per_h * horizon as f64;
        let capex_annualized_usd = ComponentCosts {
            electrolyser: crf * params.capex_el * caps.electrolyser_kw * f,
            wind: crf * params.capex_wind * caps.wind_kw * f,
            pv: crf * params.capex_pv * caps.pv_kw * f,
            storage: crf * storage_unit_cost * caps.storage_kg * f,
        };
        let om_usd = ComponentCosts {
            electrolyser: params.fom_el * caps.electrolyser_kw * f + params.vom_el * annual_h2_kg,
            wind: params.fom_wind * caps.wind_kw * f,
            pv: params.fom_pv * caps.pv_kw * f,
            storage: 0.0,
        };
        let mut out = Self {
            grid_electricity_usd,
            capex_annualized_usd,
            om_usd,
            annual_h2_kg,
            lcoh_usd_per_kg: 0.0,
            horizon_fraction: f,
        };
        out.lcoh_usd_per_kg = out.total_usd() / annual_h2_kg;
        Ok(out)
    }
}

/// Total undiscounted CAPEX in USD.
pub fn total_capex(params: &PlantParameters, caps: &Capacities, storage_unit_cost: f64) -> f64 {
    params.capex_el * caps.electrolyser_kw
        + params.capex_wind * caps.wind_kw
        + params.capex_pv * caps.pv_kw
        + storage_unit_cost * caps.storage_kg
}

#[derive(Clone)]
pub struct SolveOptions {
    pub solver: Arc<dyn LpSolver>,
    pub max_iterations: usize,
    /// Relative change in storage unit cost below which the fixed point stops.
    pub relative_tolerance: f64,
    /// Capacity used to pick the technology and price storage before the
    /// first solve, and again whenever a solve builds no storage.
    pub seed_capacity_kg: f64,
    /// When set, every LP built is written to `<dir>/<scenario>_iter<k>.lp`.
    pub export_lp_dir: Option<PathBuf>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            solver: Arc::new(HighsSolver::default()),
            max_iterations: 20,
            relative_tolerance: 0.01,
            seed_capacity_kg: 1000.0,
            export_lp_dir: None,
        }
    }
}

impl fmt::Debug for SolveOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolveOptions")
            .field("solver", &self.solver.name())
            .field("max_iterations", &self.max_iterations)
            .field("relative_tolerance", &self.relative_tolerance)
            .field("seed_capacity_kg", &self.seed_capacity_kg)
            .field("export_lp_dir", &self.export_lp_dir)
            .finish()
    }
}

#[derive(Debug, Error)]
pub enum OptimizeError {
    #[error("scenario {scenario}: infeasible")]
    Infeasible { scenario: String },
    #[error("scenario {scenario}: unbounded")]
    Unbounded { scenario: String },
    #[error("scenario {scenario}: solver failure")]
    SolverFailure { scenario: String },
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("scenario {scenario}: unknown zone {zone}")]
    UnknownZone { scenario: String, zone: String },
    #[error("scenario {scenario}: invalid input: {issues:?}")]
    InvalidInput {
        scenario: String,
        issues: Vec<ValidationIssue>,
    },
    #[error("scenario {scenario}: {source}")]
    Plant { scenario: String, source: PlantError },
    #[error("scenario {scenario}: {source}")]
    Policy { scenario: String, source: PolicyError },
    #[error("scenario {scenario}: {source}")]
    Series { scenario: String, source: SeriesError },
    #[error("scenario {scenario}: {source}")]
    Domain { scenario: String, source: DomainError },
    #[error("writing LP export: {0}")]
    Io(#[from] std::io::Error),
}

impl OptimizeError {
    /// LP status this error corresponds to, if it came from the solver.
    pub fn lp_status(&self) -> Option<LpStatus> {
        match self {
            OptimizeError::Infeasible { .. } => Some(LpStatus::Infeasible),
            OptimizeError::Unbounded { .. } => Some(LpStatus::Unbounded),
            OptimizeError::SolverFailure { .. } => Some(LpStatus::SolverFailure),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointStep {
    pub technology: StorageTech,
    pub unit_cost_usd_per_kg: f64,
    pub storage_kg: f64,
    pub objective_usd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorageChoice {
    pub technology: StorageTech,
    pub unit_cost_usd_per_kg: f64,
    pub mu_comp2_kwh_per_kg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub scenario: String,
    pub capacities: Capacities,
    pub storage: StorageChoice,
    pub iterations: usize,
    pub converged: bool,
    pub steps: Vec<FixedPointStep>,
    pub objective_usd: f64,
    pub capex_usd: f64,
    pub dispatch: Dispatch,
}

#[derive(Debug, Clone)]
pub struct PlantSolution {
    pub scenario: ScenarioSpec,
    pub report: SolutionReport,
    pub costs: CostBreakdown,
}

struct Iterate {
    tech: StorageTech,
    unit_cost: f64,
    vars: PlantVars,
    solution: LpSolution,
}

fn zone<'a>(zones: &'a ZoneLibrary, name: &str, scenario: &str) -> Result<&'a Zone, OptimizeError> {
    zones.get(name).ok_or_else(|| OptimizeError::UnknownZone {
        scenario: scenario.into(),
        zone: name.into(),
    })
}

fn build_scenario_model(
    scenario: &ScenarioSpec,
    params: &PlantParameters,
    buy: &Zone,
    sell: &Zone,
    tech: StorageTech,
    unit_cost: f64,
) -> Result<(LpModel, PlantVars), OptimizeError> {
    let name = || scenario.name.clone();
    let horizon = buy.horizon();
    let (mut model, vars) = build_plant(
        params,
        &sell.ref_wind,
        &sell.ref_pv,
        &scenario.capacities,
        scenario.mode,
        horizon,
        tech.mu_comp2(params),
    )
    .map_err(|source| OptimizeError::Plant {
        scenario: name(),
        source,
    })?;

    let policy = |r: Result<(), PolicyError>| {
        r.map_err(|source| OptimizeError::Policy {
            scenario: name(),
            source,
        })
    };
    if matches!(scenario.geo, Geo::Split { .. }) {
        policy(wire_two_grid(&mut model, &vars, &sell.grid, &buy.grid))?;
    }
    if let Some(interval) = scenario.tc_interval {
        policy(apply_temporal_correlation(
            &mut model,
            &vars,
            &IntervalPartition::for_interval(interval, horizon),
        ))?;
    }
    let annual_h2 = params.load_kg_per_h * horizon as f64;
    if let Some(cap) = scenario.ei_mef_cap {
        policy(apply_emission_cap(
            &mut model,
            &vars,
            &buy.grid.mef,
            &sell.grid.mef,
            cap,
            annual_h2,
        ))?;
    }
    if let Some(cap) = scenario.capex_cap_usd {
        policy(apply_capex_cap(&mut model, &vars, params, unit_cost, cap))?;
    }

    let f = horizon as f64 / HOURS_PER_YEAR as f64;
    let crf = crf(params.interest, params.lifetime_years).map_err(|source| OptimizeError::Domain {
        scenario: name(),
        source,
    })?;
    let mut obj = LinearExpr::term(vars.c_el, f * (crf * params.capex_el + params.fom_el))
        .with(vars.c_wind, f * (crf * params.capex_wind + params.fom_wind))
        .with(vars.c_pv, f * (crf * params.capex_pv + params.fom_pv))
        .with(vars.c_store, f * crf * unit_cost);
    obj.add_constant(params.vom_el * annual_h2);
    let (p_buy, p_sell) = (buy.grid.spot_price.values(), sell.grid.spot_price.values());
    for t in 0..horizon {
        obj.add_term(vars.import[t], p_buy[t] + params.ts_fee);
        obj.add_term(vars.export[t], -p_sell[t]);
    }
    model.set_objective(obj).map_err(|e| OptimizeError::Plant {
        scenario: name(),
        source: e.into(),
    })?;
    Ok((model, vars))
}

/// Sizes and dispatches the plant for one scenario at least cost.
pub fn optimize_plant(
    scenario: &ScenarioSpec,
    params: &PlantParameters,
    zones: &ZoneLibrary,
    options: &SolveOptions,
) -> Result<PlantSolution, OptimizeError> {
    scenario.validate()?;
    let name = scenario.name.clone();
    params.validate().map_err(|issues| OptimizeError::InvalidInput {
        scenario: name.clone(),
        issues,
    })?;
    let buy = zone(zones, scenario.geo.buy_zone(), &name)?;
    let sell = zone(zones, scenario.geo.sell_zone(), &name)?;
    let horizon = buy.horizon();
    for z in [buy, sell] {
        z.validate(horizon)
            .map_err(|issues| OptimizeError::InvalidInput {
                scenario: name.clone(),
                issues,
            })?;
    }

    let domain = |source| OptimizeError::Domain {
        scenario: name.clone(),
        source,
    };
    let seed_tech = select_storage_tech(options.seed_capacity_kg, params.storage_tech_threshold_kg);
    let seed_cost = storage_unit_cost(options.seed_capacity_kg, seed_tech).map_err(domain)?;
    let mut tech = seed_tech;
    let mut unit_cost = seed_cost;
    let mut steps = Vec::new();
    let mut best: Option<Iterate> = None;
    let mut converged = false;

    for iteration in 1..=options.max_iterations.max(1) {
        let (model, vars) = build_scenario_model(scenario, params, buy, sell, tech, unit_cost)?;
        if let Some(dir) = &options.export_lp_dir {
            std::fs::create_dir_all(dir)?;
            let file = std::fs::File::create(dir.join(format!("{name}_iter{iteration}.lp")))?;
            write_lp(&model, std::io::BufWriter::new(file))?;
        }
        let solution = options.solver.solve(&model);
        match solution.status {
            LpStatus::Optimal => {}
            // Keep the last good iterate if re-pricing made the model fail.
            _ if best.is_some() => break,
            LpStatus::Infeasible => return Err(OptimizeError::Infeasible { scenario: name }),
            LpStatus::Unbounded => return Err(OptimizeError::Unbounded { scenario: name }),
            LpStatus::SolverFailure => return Err(OptimizeError::SolverFailure { scenario: name }),
        }

        let storage_kg = solution.value(vars.c_store).max(0.0);
        steps.push(FixedPointStep {
            technology: tech,
            unit_cost_usd_per_kg: unit_cost,
            storage_kg,
            objective_usd: solution.objective_value,
        });
        let (next_tech, next_cost) = if storage_kg > 1e-9 {
            let t = select_storage_tech(storage_kg, params.storage_tech_threshold_kg);
            (t, storage_unit_cost(storage_kg, t).map_err(domain)?)
        } else {
            (seed_tech, seed_cost)
        };
        let settled =
            next_tech == tech && (next_cost - unit_cost).abs() <= options.relative_tolerance * unit_cost;

        let current = Iterate {
            tech,
            unit_cost,
            vars,
            solution,
        };
        if settled {
            best = Some(current);
            converged = true;
            break;
        }
        if best
            .as_ref()
            .is_none_or(|b| current.solution.objective_value < b.solution.objective_value)
        {
            best = Some(current);
        }
        tech = next_tech;
        unit_cost = next_cost;
    }

    let Iterate {
        tech,
        unit_cost,
        vars,
        solution,
    } = best.expect("at least one optimal iterate");
    let capacities = vars.capacities(&solution);
    let dispatch = vars.dispatch(&solution);
    let grid = electricity_cost(
        &dispatch.import_series(),
        &dispatch.export_series(),
        &buy.grid.spot_price,
        &sell.grid.spot_price,
        params.ts_fee,
    )
    .map_err(|source| OptimizeError::Series {
        scenario: name.clone(),
        source,
    })?;
    let costs = CostBreakdown::compute(params, &capacities, unit_cost, grid, horizon).map_err(domain)?;
    let report = SolutionReport {
        scenario: name.clone(),
        capacities,
        storage: StorageChoice {
            technology: tech,
            unit_cost_usd_per_kg: unit_cost,
            mu_comp2_kwh_per_kg: tech.mu_comp2(params),
        },
        iterations: steps.len(),
        converged,
        steps,
        objective_usd: solution.objective_value,
        capex_usd: total_capex(params, &capacities, unit_cost),
        dispatch,
    };
    Ok(PlantSolution {
        scenario: scenario.clone(),
        report,
        costs,
    })
}
