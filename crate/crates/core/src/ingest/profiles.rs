//! Grid and RE profile CSVs.
//!
//! Grid profile: header `hour,spot_price_aud_per_mwh,mef_kgco2e_per_kwh,aef_kgco2e_per_kwh`,
//! one row per hour with `hour` counting up from 0. Prices are AUD/MWh on disk
//! and USD/kWh in memory. Zone metadata lives in a JSON sidecar with the same
//! stem (`qld.csv` → `qld.json`):
//!
//! ```json
//! {"zone_id": "QLD", "ef_location": 0.71, "arpp": 0.1872, "rmf": 0.81}
//! ```
//!
//! RE profile: header `hour,wind_ref_kw,pv_ref_kw`, output of the reference
//! wind farm and PV field in kW.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::types::{convert_price, validate_profile, GridProfile, HourlySeries, PlantParameters, Unit, Zone};

pub const GRID_COLUMNS: [&str; 4] = [
    "hour",
    "spot_price_aud_per_mwh",
    "mef_kgco2e_per_kwh",
    "aef_kgco2e_per_kwh",
];
pub const RE_COLUMNS: [&str; 3] = ["hour", "wind_ref_kw", "pv_ref_kw"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileMetadata {
    pub zone_id: String,
    pub ef_location: f64,
    pub arpp: f64,
    pub rmf: f64,
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

/// Reads a numeric table with the given columns. Returns one row per record,
/// in column order, after checking the `hour` column counts up from 0.
fn read_table<const N: usize>(
    path: &Path,
    columns: [&'static str; N],
    horizon: usize,
) -> Result<Vec<(u64, [f64; N])>, IngestError> {
    let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| IngestError::Parse {
            path: path.into(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let mut index = [0usize; N];
    for (slot, column) in index.iter_mut().zip(columns) {
        *slot = headers
            .iter()
            .position(|h| h == column)
            .ok_or(IngestError::MissingColumn {
                path: path.into(),
                column,
            })?;
    }

    let mut rows = Vec::with_capacity(horizon);
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| IngestError::Parse {
            path: path.into(),
            line: e.position().map_or(k as u64 + 2, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(k as u64 + 2, |p| p.line());
        let mut values = [0.0; N];
        for ((value, &i), column) in values.iter_mut().zip(&index).zip(columns) {
            let cell = record.get(i).unwrap_or("");
            *value = cell
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| IngestError::Parse {
                    path: path.into(),
                    line,
                    message: format!("column {column}: `{cell}` is not a finite number"),
                })?;
        }
        if values[0] != k as f64 {
            return Err(IngestError::Parse {
                path: path.into(),
                line,
                message: format!("hour {} out of sequence, expected {k}", values[0]),
            });
        }
        rows.push((line, values));
    }
    if rows.len() != horizon {
        return Err(IngestError::RowCount {
            path: path.into(),
            expected: horizon,
            found: rows.len(),
        });
    }
    Ok(rows)
}

fn read_metadata(path: &Path) -> Result<ProfileMetadata, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| IngestError::Json {
        path: path.into(),
        message: format!("line {}: {e}", e.line()),
    })
}

/// Loads a grid profile CSV and its sidecar, converting prices at `fx_usd_per_aud`.
pub fn load_grid_profile(
    path: &Path,
    horizon: usize,
    fx_usd_per_aud: f64,
) -> Result<GridProfile, IngestError> {
    let meta = read_metadata(&sidecar_path(path))?;
    let rows = read_table(path, GRID_COLUMNS, horizon)?;
    let mut price = Vec::with_capacity(horizon);
    for (line, r) in &rows {
        price.push(
            convert_price(r[1], fx_usd_per_aud).map_err(|e| IngestError::Parse {
                path: path.into(),
                line: *line,
                message: e.to_string(),
            })?,
        );
    }
    let column = |i: usize, unit| {
        HourlySeries::new(rows.iter().map(|(_, r)| r[i]).collect(), unit).expect("cells checked finite")
    };
    let profile = GridProfile {
        zone_id: meta.zone_id,
        spot_price: HourlySeries::new(price, Unit::UsdPerKwh).expect("converted prices are finite"),
        mef: column(2, Unit::KgCo2ePerKwh),
        aef: column(3, Unit::KgCo2ePerKwh),
        ef_location: meta.ef_location,
        arpp: meta.arpp,
        rmf: meta.rmf,
    };
    validate_profile(&profile, horizon).map_err(|issues| IngestError::Validation {
        path: path.into(),
        issues,
    })?;
    Ok(profile)
}

/// Loads reference wind and PV output, checking each value against the
/// reference capacities in `params`.
pub fn load_re_profile(
    path: &Path,
    horizon: usize,
    params: &PlantParameters,
) -> Result<(HourlySeries, HourlySeries), IngestError> {
    let rows = read_table(path, RE_COLUMNS, horizon)?;
    for (line, r) in &rows {
        for (value, column, limit) in [
            (r[1], "wind_ref_kw", params.c_ref_wind_kw),
            (r[2], "pv_ref_kw", params.c_ref_pv_kw),
        ] {
            if !(0.0..=limit).contains(&value) {
                return Err(IngestError::Range {
                    path: path.into(),
                    line: *line,
                    column,
                    value,
                    limit,
                });
            }
        }
    }
    let column =
        |i: usize| HourlySeries::new(rows.iter().map(|(_, r)| r[i]).collect(), Unit::Kw).expect("finite");
    Ok((column(1), column(2)))
}

pub fn load_zone(
    grid_csv: &Path,
    re_csv: &Path,
    horizon: usize,
    fx_usd_per_aud: f64,
    params: &PlantParameters,
) -> Result<Zone, IngestError> {
    let grid = load_grid_profile(grid_csv, horizon, fx_usd_per_aud)?;
    let (ref_wind, ref_pv) = load_re_profile(re_csv, horizon, params)?;
    Ok(Zone {
        grid,
        ref_wind,
        ref_pv,
    })
}

/// AUD/MWh value that converts back to exactly `usd_per_kwh`, when one exists
/// within a few ulps of the direct inverse.
fn price_to_aud(usd_per_kwh: f64, fx: f64) -> f64 {
    let direct = usd_per_kwh * 1000.0 / fx;
    let back = |a: f64| a * fx / 1000.0;
    let (mut up, mut down) = (direct, direct);
    for _ in 0..8 {
        if back(up) == usd_per_kwh {
            return up;
        }
        if back(down) == usd_per_kwh {
            return down;
        }
        up = up.next_up();
        down = down.next_down();
    }
    direct
}

fn create(path: &Path) -> Result<BufWriter<File>, IngestError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| IngestError::io(path, e))
}

/// Writes a grid profile CSV (prices back in AUD/MWh) and its sidecar.
pub fn write_grid_profile(
    profile: &GridProfile,
    path: &Path,
    fx_usd_per_aud: f64,
) -> Result<(), IngestError> {
    let io = |e| IngestError::io(path, e);
    let mut out = create(path)?;
    writeln!(out, "{}", GRID_COLUMNS.join(",")).map_err(io)?;
    for t in 0..profile.spot_price.len() {
        writeln!(
            out,
            "{t},{},{},{}",
            price_to_aud(profile.spot_price.values()[t], fx_usd_per_aud),
            profile.mef.values()[t],
            profile.aef.values()[t]
        )
        .map_err(io)?;
    }
    out.flush().map_err(io)?;

    let meta = ProfileMetadata {
        zone_id: profile.zone_id.clone(),
        ef_location: profile.ef_location,
        arpp: profile.arpp,
        rmf: profile.rmf,
    };
    super::write_json(&meta, &sidecar_path(path))
}

pub fn write_re_profile(
    ref_wind: &HourlySeries,
    ref_pv: &HourlySeries,
    path: &Path,
) -> Result<(), IngestError> {
    let io = |e| IngestError::io(path, e);
    let mut out = create(path)?;
    writeln!(out, "{}", RE_COLUMNS.join(",")).map_err(io)?;
    for (t, (w, p)) in ref_wind.values().iter().zip(ref_pv.values()).enumerate() {
        writeln!(out, "{t},{w},{p}").map_err(io)?;
    }
    out.flush().map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{synth_fixture, FixtureKind};

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn meta(dir: &Path, stem: &str) {
        write(
            dir,
            &format!("{stem}.json"),
            r#"{"zone_id":"QLD","ef_location":0.71,"arpp":0.1872,"rmf":0.81}"#,
        );
    }

    #[test]
    fn grid_profile_with_negative_price() {
        let dir = tempfile::tempdir().unwrap();
        meta(dir.path(), "g");
        let p = write(
            dir.path(),
            "g.csv",
            "hour,spot_price_aud_per_mwh,mef_kgco2e_per_kwh,aef_kgco2e_per_kwh\n0,95,0.5,0.6\n1,-55.0,0.4,0.5\n",
        );
        let g = load_grid_profile(&p, 2, 0.7).unwrap();
        assert_eq!(g.zone_id, "QLD");
        assert!((g.spot_price.values()[0] - 0.0665).abs() < 1e-15);
        assert!((g.spot_price.values()[1] + 0.0385).abs() < 1e-15);
        assert_eq!(g.mef.values(), &[0.5, 0.4]);
    }

    #[test]
    fn grid_profile_errors_carry_path_and_line() {
        let dir = tempfile::tempdir().unwrap();
        meta(dir.path(), "g");
        let header = "hour,spot_price_aud_per_mwh,mef_kgco2e_per_kwh,aef_kgco2e_per_kwh\n";
        let p = write(
            dir.path(),
            "g.csv",
            &format!("{header}0,95,0.5,0.6\n1,abc,0.4,0.5\n"),
        );
        match load_grid_profile(&p, 2, 0.7) {
            Err(IngestError::Parse { path, line, .. }) => {
                assert_eq!(path, p);
                assert_eq!(line, 3);
            }
            other => panic!("{other:?}"),
        }

        let p = write(dir.path(), "g.csv", &format!("{header}0,95,0.5,0.6\n"));
        let err = load_grid_profile(&p, 2, 0.7).unwrap_err();
        assert!(matches!(
            err,
            IngestError::RowCount {
                expected: 2,
                found: 1,
                ..
            }
        ));
        assert!(err.to_string().contains("g.csv"));

        let p = write(
            dir.path(),
            "g.csv",
            "hour,spot_price_aud_per_mwh,aef_kgco2e_per_kwh\n0,1,1\n",
        );
        assert!(matches!(
            load_grid_profile(&p, 1, 0.7),
            Err(IngestError::MissingColumn {
                column: "mef_kgco2e_per_kwh",
                ..
            })
        ));
    }

    #[test]
    fn re_profile_ranges() {
        let dir = tempfile::tempdir().unwrap();
        let params = PlantParameters::default();
        let p = write(
            dir.path(),
            "re.csv",
            "hour,wind_ref_kw,pv_ref_kw\n0,0,0\n1,0,1000\n",
        );
        let (w, pv) = load_re_profile(&p, 2, &params).unwrap();
        assert_eq!(w.sum(), 0.0);
        assert_eq!(pv.values(), &[0.0, 1000.0]);

        let p = write(
            dir.path(),
            "re.csv",
            "hour,wind_ref_kw,pv_ref_kw\n0,0,0\n1,0,1500\n",
        );
        match load_re_profile(&p, 2, &params) {
            Err(IngestError::Range {
                line, column, limit, ..
            }) => {
                assert_eq!((line, column, limit), (3, "pv_ref_kw", 1000.0));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn eight_thousand_hour_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let fixture = synth_fixture(FixtureKind::RandomWalk, 8760, 3);
        let zone = fixture.zone();
        let grid_csv = dir.path().join("rw.csv");
        let re_csv = dir.path().join("rw_re.csv");
        write_grid_profile(&zone.grid, &grid_csv, 0.7).unwrap();
        write_re_profile(&zone.ref_wind, &zone.ref_pv, &re_csv).unwrap();
        let loaded = load_zone(&grid_csv, &re_csv, 8760, 0.7, &PlantParameters::default()).unwrap();
        assert_eq!(&loaded, zone);
        assert!(matches!(
            load_grid_profile(&grid_csv, 8759, 0.7),
            Err(IngestError::RowCount {
                expected: 8759,
                found: 8760,
                ..
            })
        ));
    }
}
