//! Scenario suites and parameter sweeps.
//!
//! Solves are independent once their inputs are known, so everything after a
//! prerequisite solve runs on the rayon pool. Results keep input order, and
//! each LP solve is single-threaded, so output does not depend on scheduling.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::certification::{certify, CertificationError, EmissionsReport};
use crate::economics::{optimize_plant, OptimizeError, PlantSolution, SolveOptions};
use crate::ingest::{
    load_zone, synth_fixture, write_dispatch_csv, write_json, IngestError, Provenance, RunConfig,
    ScenarioReport, ScenarioResultReport, ScenarioSummary, SuiteReport, SuiteRow, SweepPointReport,
    SweepReport, ZoneSource, SCHEMA_VERSION,
};
use crate::lp::{HighsSolver, LpStatus};
use crate::types::{
    CapacityBound, CapacitySpec, Geo, GridMode, PlantParameters, ScenarioSpec, TcInterval, ZoneLibrary,
    PRESET_SCENARIOS,
};
use crate::HOURS_PER_YEAR;

/// REC prices bracketing the grid-powered baseline, AUD per MWh certificate.
pub const REC_PRICE_RANGE_AUD: (f64, f64) = (20.0, 60.0);

/// Relative slack on CAPEX caps taken from another solve, so the capping
/// design itself stays feasible after rounding.
const CAPEX_CAP_SLACK: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error("scenario {scenario}: certification: {source}")]
    Certification {
        scenario: String,
        source: CertificationError,
    },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("{0}")]
    Input(String),
}

impl RunError {
    /// `optimal` is never returned; this labels failures only.
    pub fn status(&self) -> &'static str {
        match self {
            RunError::Optimize(e) => match e.lp_status() {
                Some(LpStatus::Infeasible) => "infeasible",
                Some(LpStatus::Unbounded) => "unbounded",
                Some(_) => "solver_failure",
                None => "error",
            },
            _ => "error",
        }
    }

    pub fn lp_status(&self) -> Option<LpStatus> {
        match self {
            RunError::Optimize(e) => e.lp_status(),
            _ => None,
        }
    }
}

/// Command-line style overrides applied on top of a [`RunConfig`].
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub horizon: Option<usize>,
    pub seed: Option<u64>,
    pub fx_usd_per_aud: Option<f64>,
    pub export_lp_dir: Option<PathBuf>,
}

/// Everything a solve needs: parameters, loaded zones and solver settings.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub params: PlantParameters,
    pub zones: ZoneLibrary,
    pub default_zone: String,
    pub options: SolveOptions,
    pub horizon: usize,
    pub fx_usd_per_aud: f64,
    pub seed: u64,
    /// `name=source` for the provenance block.
    pub zone_sources: Vec<String>,
}

impl RunContext {
    /// Context over already-built zones, with default solver settings.
    pub fn new(params: PlantParameters, zones: ZoneLibrary, default_zone: impl Into<String>) -> Self {
        let horizon = zones.values().next().map_or(0, |z| z.horizon());
        let zone_sources = zones.keys().map(|k| format!("{k}=in-memory")).collect();
        Self {
            params,
            zones,
            default_zone: default_zone.into(),
            options: SolveOptions::default(),
            horizon,
            fx_usd_per_aud: 0.7,
            seed: 0,
            zone_sources,
        }
    }

    pub fn from_config(config: &RunConfig, overrides: &Overrides) -> Result<Self, RunError> {
        let horizon = overrides.horizon.unwrap_or(config.horizon);
        let seed = overrides.seed.unwrap_or(config.seed);
        let fx = overrides.fx_usd_per_aud.unwrap_or(config.fx_usd_per_aud);
        if horizon == 0 {
            return Err(RunError::Input("horizon must be at least one hour".into()));
        }
        if !(fx.is_finite() && fx > 0.0) {
            return Err(RunError::Input(format!("fx rate must be positive, got {fx}")));
        }

        let mut zones = ZoneLibrary::new();
        let mut zone_sources = Vec::new();
        for (name, source) in &config.zones {
            let (zone, label) = match source {
                ZoneSource::Files { grid_csv, re_csv } => (
                    load_zone(grid_csv, re_csv, horizon, fx, &config.plant)?,
                    format!("{name}={}+{}", file_name(grid_csv), file_name(re_csv)),
                ),
                ZoneSource::Fixture {
                    fixture,
                    side,
                    seed: zone_seed,
                } => {
                    let s = zone_seed.unwrap_or(seed);
                    let f = synth_fixture(*fixture, horizon, s);
                    let zone = side.map_or_else(|| f.zone().clone(), |side| f.side(side).clone());
                    let side = side.map(|s| format!("/{s:?}").to_lowercase()).unwrap_or_default();
                    (zone, format!("{name}=fixture:{fixture}{side}:seed={s}"))
                }
            };
            zones.insert(name.clone(), zone);
            zone_sources.push(label);
        }

        let solver = HighsSolver {
            time_limit_s: config.solver.time_limit_s,
            ..HighsSolver::default()
        };
        let options = SolveOptions {
            solver: Arc::new(solver),
            max_iterations: config.solver.max_iterations,
            relative_tolerance: config.solver.relative_tolerance,
            seed_capacity_kg: config.solver.seed_capacity_kg,
            export_lp_dir: overrides.export_lp_dir.clone(),
        };
        Ok(Self {
            params: config.plant.clone(),
            zones,
            default_zone: config.zone.clone(),
            options,
            horizon,
            fx_usd_per_aud: fx,
            seed,
            zone_sources,
        })
    }

    pub fn provenance(&self, notes: Vec<String>) -> Provenance {
        let mut notes = notes;
        if self.horizon != HOURS_PER_YEAR {
            notes.push(format!(
                "fixed costs pro-rated by {}/{HOURS_PER_YEAR}; LCOH refers to the modelled horizon",
                self.horizon
            ));
        }
        Provenance {
            solver: self.options.solver.name().to_string(),
            horizon_hours: self.horizon,
            fx_usd_per_aud: self.fx_usd_per_aud,
            seed: self.seed,
            zones: self.zone_sources.clone(),
            notes,
        }
    }
}

fn file_name(p: &Path) -> String {
    p.file_name()
        .map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub solution: PlantSolution,
    pub emissions: EmissionsReport,
}

pub type ScenarioOutcome = Result<ScenarioResult, RunError>;

/// Optimises and certifies one scenario.
pub fn run_scenario(ctx: &RunContext, spec: &ScenarioSpec) -> ScenarioOutcome {
    run_with_options(ctx, spec, &ctx.options)
}

fn run_with_options(ctx: &RunContext, spec: &ScenarioSpec, options: &SolveOptions) -> ScenarioOutcome {
    let solution = optimize_plant(spec, &ctx.params, &ctx.zones, options)?;
    // optimize_plant has already resolved both zones.
    let buy = &ctx.zones[spec.geo.buy_zone()].grid;
    let sell = &ctx.zones[spec.geo.sell_zone()].grid;
    let emissions = certify(
        &solution.report.dispatch,
        buy,
        sell,
        ctx.params.load_kg_per_h,
        None,
    )
    .map_err(|source| RunError::Certification {
        scenario: spec.name.clone(),
        source,
    })?;
    Ok(ScenarioResult { solution, emissions })
}

fn summary(spec: &ScenarioSpec) -> ScenarioSummary {
    ScenarioSummary {
        name: spec.name.clone(),
        mode: spec.mode,
        tc_interval: spec.tc_interval,
        ei_mef_cap_kg_per_kg: spec.ei_mef_cap,
        capex_cap_usd: spec.capex_cap_usd,
        buy_zone: spec.geo.buy_zone().into(),
        sell_zone: spec.geo.sell_zone().into(),
    }
}

pub fn scenario_report(
    ctx: &RunContext,
    spec: &ScenarioSpec,
    outcome: &ScenarioOutcome,
    notes: Vec<String>,
) -> ScenarioReport {
    let provenance = ctx.provenance(notes);
    match outcome {
        Ok(r) => {
            let s = &r.solution;
            let d = &s.report.dispatch;
            let residual = if matches!(spec.geo, Geo::Split { .. }) {
                d.max_split_balance_residual()
            } else {
                d.max_balance_residual()
            };
            ScenarioReport {
                schema_version: SCHEMA_VERSION,
                scenario: summary(spec),
                status: "optimal".into(),
                message: (!s.report.converged)
                    .then(|| "storage cost fixed point did not converge; best iterate reported".into()),
                lcoh_usd_per_kg: Some(s.costs.lcoh_usd_per_kg),
                result: Some(ScenarioResultReport {
                    capacities: s.report.capacities,
                    storage: s.report.storage.clone(),
                    converged: s.report.converged,
                    fixed_point_iterations: s.report.iterations,
                    fixed_point_steps: s.report.steps.clone(),
                    objective_usd: s.report.objective_usd,
                    capex_usd: s.report.capex_usd,
                    costs: s.costs.clone(),
                    emissions: r.emissions.clone(),
                    max_balance_residual_kw: residual,
                    hydrogen_mass_residual_kg: d.hydrogen_mass_residual(ctx.params.load_kg_per_h),
                }),
                provenance,
            }
        }
        Err(e) => ScenarioReport {
            schema_version: SCHEMA_VERSION,
            scenario: summary(spec),
            status: e.status().into(),
            message: Some(e.to_string()),
            lcoh_usd_per_kg: None,
            result: None,
            provenance,
        },
    }
}

/// Writes `<name>.json` and, when solved, `<name>_dispatch.csv` into `dir`.
pub fn write_scenario_files(
    dir: &Path,
    report: &ScenarioReport,
    outcome: &ScenarioOutcome,
) -> Result<(), IngestError> {
    std::fs::create_dir_all(dir).map_err(|e| IngestError::Io {
        path: dir.into(),
        source: e,
    })?;
    let name = &report.scenario.name;
    write_json(report, &dir.join(format!("{name}.json")))?;
    if let Ok(r) = outcome {
        write_dispatch_csv(
            &r.solution.report.dispatch,
            &dir.join(format!("{name}_dispatch.csv")),
        )?;
    }
    Ok(())
}

#[derive(Debug)]
pub struct SuiteOutcome {
    /// Off-grid CAPEX (with rounding slack) applied to the grid scenarios.
    pub capex_cap_usd: Option<f64>,
    /// Every requested scenario in request order, with the cap already applied.
    pub results: Vec<(ScenarioSpec, ScenarioOutcome)>,
}

impl SuiteOutcome {
    pub fn get(&self, name: &str) -> Option<&ScenarioOutcome> {
        self.results.iter().find(|(s, _)| s.name == name).map(|(_, r)| r)
    }

    pub fn lcoh(&self, name: &str) -> Option<f64> {
        self.get(name)?
            .as_ref()
            .ok()
            .map(|r| r.solution.costs.lcoh_usd_per_kg)
    }
}

/// The preset suite in order, co-located in `zone`.
pub fn preset_suite(zone: &str) -> Vec<ScenarioSpec> {
    PRESET_SCENARIOS
        .iter()
        .filter_map(|n| ScenarioSpec::preset(n, zone))
        .collect()
}

/// Runs the off-grid design first, then every other scenario in parallel
/// with the off-grid CAPEX as a cap on grid-connected ones that set no cap of
/// their own. Grid scenarios also start their storage pricing from the
/// off-grid storage size, so the capping design is affordable in the first
/// iteration. If the off-grid solve fails the grid scenarios run uncapped.
pub fn run_suite(ctx: &RunContext, specs: &[ScenarioSpec]) -> SuiteOutcome {
    let off_grid_spec = specs
        .iter()
        .find(|s| s.mode == GridMode::OffGrid)
        .cloned()
        .unwrap_or_else(|| ScenarioSpec::new("off-grid", GridMode::OffGrid, &ctx.default_zone));
    let off_grid = run_scenario(ctx, &off_grid_spec);

    let (cap, options) = match &off_grid {
        Ok(r) => {
            let mut options = ctx.options.clone();
            let storage = r.solution.report.capacities.storage_kg;
            if storage > 1e-9 {
                options.seed_capacity_kg = storage;
            }
            (
                Some(r.solution.report.capex_usd * (1.0 + CAPEX_CAP_SLACK)),
                options,
            )
        }
        Err(_) => (None, ctx.options.clone()),
    };

    let jobs: Vec<ScenarioSpec> = specs
        .iter()
        .filter(|s| s.name != off_grid_spec.name)
        .map(|s| {
            let mut s = s.clone();
            if s.mode != GridMode::OffGrid && s.capex_cap_usd.is_none() {
                s.capex_cap_usd = cap;
            }
            s
        })
        .collect();
    let mut solved: Vec<(ScenarioSpec, ScenarioOutcome)> = jobs
        .into_par_iter()
        .map(|s| {
            let outcome = if s.capex_cap_usd == cap && cap.is_some() {
                run_with_options(ctx, &s, &options)
            } else {
                run_scenario(ctx, &s)
            };
            (s, outcome)
        })
        .collect();

    let mut off_grid = Some((off_grid_spec, off_grid));
    let mut results = Vec::with_capacity(specs.len());
    for s in specs {
        if off_grid.as_ref().is_some_and(|(o, _)| o.name == s.name) {
            results.push(off_grid.take().expect("checked above"));
        } else if let Some(i) = solved.iter().position(|(j, _)| j.name == s.name) {
            results.push(solved.remove(i));
        }
    }
    SuiteOutcome {
        capex_cap_usd: cap,
        results,
    }
}

pub fn suite_report(ctx: &RunContext, outcome: &SuiteOutcome) -> SuiteReport {
    let mut notes = vec!["CAPEX cap includes storage at the iteration's unit cost".to_string()];
    if outcome.capex_cap_usd.is_none() {
        notes.push("off-grid solve failed; grid scenarios ran without a CAPEX cap".into());
    }
    let rows = outcome
        .results
        .iter()
        .map(|(spec, r)| {
            let ok = r.as_ref().ok();
            let costs = ok.map(|r| &r.solution.costs);
            let em = ok.map(|r| &r.emissions);
            SuiteRow {
                scenario: spec.name.clone(),
                status: r
                    .as_ref()
                    .map_or_else(|e| e.status().to_string(), |_| "optimal".into()),
                lcoh_usd_per_kg: costs.map(|c| c.lcoh_usd_per_kg),
                grid_electricity_usd: costs.map(|c| c.grid_electricity_usd),
                capex_annualized_usd: costs.map(|c| c.capex_annualized_usd.total()),
                om_usd: costs.map(|c| c.om_usd.total()),
                ei_market: em.map(|e| e.ei_market),
                ei_recs: em.map(|e| e.ei_recs),
                ei_location: em.map(|e| e.ei_location),
                ei_mef: em.map(|e| e.ei_mef),
                ei_aef: em.map(|e| e.ei_aef),
            }
        })
        .collect();
    let scenarios = outcome
        .results
        .iter()
        .map(|(spec, r)| scenario_report(ctx, spec, r, Vec::new()))
        .collect();
    SuiteReport {
        schema_version: SCHEMA_VERSION,
        capex_cap_usd: outcome.capex_cap_usd,
        rows,
        scenarios,
        provenance: ctx.provenance(notes),
    }
}

#[derive(Debug)]
pub struct SweepPoint {
    pub label: String,
    pub parameter: f64,
    pub spec: ScenarioSpec,
    pub outcome: ScenarioOutcome,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub points: Vec<SweepPoint>,
    /// RE sweep: the off-grid prerequisite. Geo sweep: the grid-powered baseline.
    pub reference: (ScenarioSpec, ScenarioOutcome),
    pub rec_band_usd_per_kg: Option<(f64, f64)>,
    pub notes: Vec<String>,
}

fn run_points(ctx: &RunContext, points: Vec<(String, f64, ScenarioSpec)>) -> Vec<SweepPoint> {
    points
        .into_par_iter()
        .map(|(label, parameter, spec)| {
            let outcome = run_scenario(ctx, &spec);
            SweepPoint {
                label,
                parameter,
                spec,
                outcome,
            }
        })
        .collect()
}

/// Evenly spaced RE factors from 0 to `1.5 · (c_wind* + c_pv*) / c_el*`.
pub fn re_factor_grid(off_grid_re_factor: f64, n_points: usize) -> Vec<f64> {
    let top = 1.5 * off_grid_re_factor;
    match n_points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|k| top * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Solves the off-grid design in `zone`, then re-solves in flexible mode with
/// the electrolyser pinned to the off-grid size and RE pinned to a range of
/// RE factors, split in the off-grid wind:PV ratio. Storage stays free.
pub fn sweep_re_factor(ctx: &RunContext, zone: &str, n_points: usize) -> Result<SweepOutcome, RunError> {
    if n_points == 0 {
        return Err(RunError::Input("a sweep needs at least one point".into()));
    }
    let off_spec = ScenarioSpec::new("off-grid", GridMode::OffGrid, zone);
    let off = run_scenario(ctx, &off_spec)?;
    let caps = off.solution.report.capacities;
    let c_el = caps.electrolyser_kw;
    let re = caps.wind_kw + caps.pv_kw;
    if !(c_el > 0.0) {
        return Err(RunError::Input("off-grid design has no electrolyser".into()));
    }
    let wind_share = if re > 0.0 { caps.wind_kw / re } else { 0.0 };

    let points = re_factor_grid(re / c_el, n_points)
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            let total = r * c_el;
            let capacities = CapacitySpec {
                wind_kw: CapacityBound::fixed(total * wind_share),
                pv_kw: CapacityBound::fixed(total * (1.0 - wind_share)),
                electrolyser_kw: CapacityBound::fixed(c_el),
                ..CapacitySpec::default()
            };
            let spec = ScenarioSpec::new(format!("re-factor-{k:03}"), GridMode::GridBuySell, zone)
                .with_capacities(capacities);
            (format!("{r:.4}"), r, spec)
        })
        .collect();
    Ok(SweepOutcome {
        points: run_points(ctx, points),
        reference: (off_spec, Ok(off)),
        rec_band_usd_per_kg: None,
        notes: vec![
            "storage capacity re-optimised at every sweep point".into(),
            format!("wind:PV split fixed at the off-grid ratio, wind share {wind_share}"),
        ],
    })
}

/// For each sell zone, places the RE there (two-grid topology) under yearly
/// temporal correlation with the electrolyser in `buy_zone`. Also solves a
/// fully grid-powered baseline in `buy_zone` and brackets it with the cost of
/// buying RECs for all its imports.
pub fn sweep_geo(ctx: &RunContext, buy_zone: &str, sell_zones: &[String]) -> Result<SweepOutcome, RunError> {
    if sell_zones.is_empty() {
        return Err(RunError::Input("geo sweep needs at least one sell zone".into()));
    }
    for z in std::iter::once(buy_zone).chain(sell_zones.iter().map(String::as_str)) {
        if !ctx.zones.contains_key(z) {
            return Err(RunError::Input(format!("unknown zone `{z}`")));
        }
    }
    let grid_only = CapacitySpec {
        wind_kw: CapacityBound::fixed(0.0),
        pv_kw: CapacityBound::fixed(0.0),
        ..CapacitySpec::default()
    };
    let baseline_spec =
        ScenarioSpec::new("grid-baseline", GridMode::GridBuySell, buy_zone).with_capacities(grid_only);

    let points = sell_zones
        .iter()
        .enumerate()
        .map(|(i, sell)| {
            let mut spec = ScenarioSpec::new(format!("geo-{sell}"), GridMode::GridBuySell, buy_zone);
            spec.geo = Geo::Split {
                sell_zone: sell.clone(),
                buy_zone: buy_zone.into(),
            };
            spec.tc_interval = Some(TcInterval::Yearly);
            (sell.clone(), i as f64, spec)
        })
        .collect();
    let (baseline, points) = rayon::join(|| run_scenario(ctx, &baseline_spec), || run_points(ctx, points));

    let rec_band_usd_per_kg = baseline.as_ref().ok().map(|b| {
        let imported_mwh = b.solution.report.dispatch.import_kw.iter().sum::<f64>() / 1000.0;
        let h2 = b.solution.costs.annual_h2_kg;
        let lcoh = b.solution.costs.lcoh_usd_per_kg;
        let band = |aud: f64| lcoh + imported_mwh * aud * ctx.fx_usd_per_aud / h2;
        (band(REC_PRICE_RANGE_AUD.0), band(REC_PRICE_RANGE_AUD.1))
    });
    Ok(SweepOutcome {
        points,
        reference: (baseline_spec, baseline),
        rec_band_usd_per_kg,
        notes: vec![
            "RE sited in the sell zone under yearly temporal correlation; no CAPEX cap".into(),
            format!(
                "REC band prices {}-{} AUD per MWh at {} USD/AUD",
                REC_PRICE_RANGE_AUD.0, REC_PRICE_RANGE_AUD.1, ctx.fx_usd_per_aud
            ),
        ],
    })
}

fn point_report(p: &SweepPoint) -> SweepPointReport {
    let ok = p.outcome.as_ref().ok();
    let em = ok.map(|r| &r.emissions);
    SweepPointReport {
        label: p.label.clone(),
        parameter: p.parameter,
        status: p
            .outcome
            .as_ref()
            .map_or_else(|e| e.status().to_string(), |_| "optimal".into()),
        lcoh_usd_per_kg: ok.map(|r| r.solution.costs.lcoh_usd_per_kg),
        ei_market: em.map(|e| e.ei_market),
        ei_recs: em.map(|e| e.ei_recs),
        ei_location: em.map(|e| e.ei_location),
        ei_mef: em.map(|e| e.ei_mef),
        ei_aef: em.map(|e| e.ei_aef),
        d_market: em.and_then(|e| e.d_market),
        d_location: em.and_then(|e| e.d_location),
    }
}

pub fn sweep_report(ctx: &RunContext, sweep: &str, outcome: &SweepOutcome) -> SweepReport {
    let (ref_spec, ref_outcome) = &outcome.reference;
    let reference = scenario_report(ctx, ref_spec, ref_outcome, Vec::new());
    let is_geo = outcome.rec_band_usd_per_kg.is_some() || ref_spec.mode != GridMode::OffGrid;
    let mut notes = outcome.notes.clone();
    if !is_geo {
        notes.push(format!(
            "off-grid reference LCOH {:?} USD/kg",
            reference.lcoh_usd_per_kg
        ));
    }
    SweepReport {
        schema_version: SCHEMA_VERSION,
        sweep: sweep.into(),
        points: outcome.points.iter().map(point_report).collect(),
        scenarios: outcome
            .points
            .iter()
            .map(|p| scenario_report(ctx, &p.spec, &p.outcome, Vec::new()))
            .collect(),
        baseline: is_geo.then_some(reference),
        rec_band_usd_per_kg: outcome.rec_band_usd_per_kg,
        provenance: ctx.provenance(notes),
    }
}
