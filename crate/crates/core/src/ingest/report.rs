//! JSON reports and CSV tables written by the runner.
//!
//! Reports are plain data. Floats are written in shortest round-trip form, so
//! reading a report back yields bit-identical values.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::certification::EmissionsReport;
use crate::economics::{CostBreakdown, FixedPointStep, StorageChoice};
use crate::plant::{Capacities, Dispatch};
use crate::types::{GridMode, TcInterval};

pub const SCHEMA_VERSION: u32 = 1;

pub const DISPATCH_COLUMNS: [&str; 13] = [
    "hour",
    "gen_wind_kw",
    "gen_pv_kw",
    "e_el_kw",
    "e_comp1_kw",
    "e_comp2_kw",
    "import_kw",
    "export_kw",
    "curtail_kw",
    "h_comp1_kg",
    "h_comp2_kg",
    "h_from_store_kg",
    "soc_kg",
];

/// How a report was produced. Holds nothing run-specific beyond inputs, so
/// identical inputs give identical reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub solver: String,
    pub horizon_hours: usize,
    pub fx_usd_per_aud: f64,
    pub seed: u64,
    /// `name=source` for every zone used.
    pub zones: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSummary {
    pub name: String,
    pub mode: GridMode,
    pub tc_interval: Option<TcInterval>,
    pub ei_mef_cap_kg_per_kg: Option<f64>,
    pub capex_cap_usd: Option<f64>,
    pub buy_zone: String,
    pub sell_zone: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioResultReport {
    pub capacities: Capacities,
    pub storage: StorageChoice,
    pub converged: bool,
    pub fixed_point_iterations: usize,
    pub fixed_point_steps: Vec<FixedPointStep>,
    pub objective_usd: f64,
    pub capex_usd: f64,
    pub costs: CostBreakdown,
    pub emissions: EmissionsReport,
    pub max_balance_residual_kw: f64,
    pub hydrogen_mass_residual_kg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub scenario: ScenarioSummary,
    /// `optimal`, `infeasible`, `unbounded`, `solver_failure` or `error`.
    pub status: String,
    pub message: Option<String>,
    pub lcoh_usd_per_kg: Option<f64>,
    pub result: Option<ScenarioResultReport>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteRow {
    pub scenario: String,
    pub status: String,
    pub lcoh_usd_per_kg: Option<f64>,
    pub grid_electricity_usd: Option<f64>,
    pub capex_annualized_usd: Option<f64>,
    pub om_usd: Option<f64>,
    pub ei_market: Option<f64>,
    pub ei_recs: Option<f64>,
    pub ei_location: Option<f64>,
    pub ei_mef: Option<f64>,
    pub ei_aef: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteReport {
    pub schema_version: u32,
    /// CAPEX of the off-grid design, applied as a cap to the grid scenarios.
    pub capex_cap_usd: Option<f64>,
    pub rows: Vec<SuiteRow>,
    pub scenarios: Vec<ScenarioReport>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPointReport {
    pub label: String,
    /// RE factor for the RE sweep, index of the sell zone for the geo sweep.
    pub parameter: f64,
    pub status: String,
    pub lcoh_usd_per_kg: Option<f64>,
    pub ei_market: Option<f64>,
    pub ei_recs: Option<f64>,
    pub ei_location: Option<f64>,
    pub ei_mef: Option<f64>,
    pub ei_aef: Option<f64>,
    pub d_market: Option<f64>,
    pub d_location: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepReport {
    pub schema_version: u32,
    /// `re-factor` or `geo`.
    pub sweep: String,
    pub points: Vec<SweepPointReport>,
    /// Full result of every point, in the same order.
    pub scenarios: Vec<ScenarioReport>,
    /// Geo sweep only: fully grid-powered design in the buy zone.
    pub baseline: Option<ScenarioReport>,
    /// Geo sweep only: baseline LCOH plus the cost of RECs covering all its imports.
    pub rec_band_usd_per_kg: Option<(f64, f64)>,
    pub provenance: Provenance,
}

/// Writes through a sibling temporary file so readers never see a partial file.
fn atomic_write(
    path: &Path,
    write: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), IngestError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut out = File::create(&tmp)
        .map(BufWriter::new)
        .map_err(|e| IngestError::io(&tmp, e))?;
    write(&mut out)
        .and_then(|()| out.flush())
        .map_err(|e| IngestError::io(&tmp, e))?;
    drop(out);
    std::fs::rename(&tmp, path).map_err(|e| IngestError::io(path, e))
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), IngestError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| IngestError::Json {
        path: path.into(),
        message: e.to_string(),
    })?;
    atomic_write(path, |out| writeln!(out, "{text}"))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| IngestError::Json {
        path: path.into(),
        message: format!("line {}: {e}", e.line()),
    })
}

pub fn write_dispatch_csv(dispatch: &Dispatch, path: &Path) -> Result<(), IngestError> {
    atomic_write(path, |out| write_dispatch(dispatch, out))
}

fn write_dispatch(d: &Dispatch, out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{}", DISPATCH_COLUMNS.join(","))?;
    for t in 0..d.horizon() {
        writeln!(
            out,
            "{t},{},{},{},{},{},{},{},{},{},{},{},{}",
            d.gen_wind_kw[t],
            d.gen_pv_kw[t],
            d.e_el_kw[t],
            d.e_comp1_kw[t],
            d.e_comp2_kw[t],
            d.import_kw[t],
            d.export_kw[t],
            d.curtail_kw[t],
            d.h_comp1_kg[t],
            d.h_comp2_kg[t],
            d.h_from_store_kg[t],
            d.soc_kg[t]
        )?;
    }
    Ok(())
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per sweep point, empty cells where a point has no solution.
pub fn write_sweep_csv(points: &[SweepPointReport], path: &Path) -> Result<(), IngestError> {
    atomic_write(path, |out| {
        writeln!(
            out,
            "label,parameter,status,lcoh_usd_per_kg,ei_market,ei_recs,ei_location,ei_mef,ei_aef,d_market,d_location"
        )?;
        for p in points {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                p.label,
                p.parameter,
                p.status,
                cell(p.lcoh_usd_per_kg),
                cell(p.ei_market),
                cell(p.ei_recs),
                cell(p.ei_location),
                cell(p.ei_mef),
                cell(p.ei_aef),
                cell(p.d_market),
                cell(p.d_location)
            )?;
        }
        Ok(())
    })
}
