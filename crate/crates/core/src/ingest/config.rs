//! TOML run configuration.
//!
//! ```toml
//! zone = "QLD"            # default zone for co-located scenarios
//! horizon = 8760
//! fx_usd_per_aud = 0.7
//! suite = ["off-grid", "hourly", "yearly"]   # optional, defaults to all presets
//!
//! [zones.QLD]
//! grid_csv = "data/qld.csv"        # sidecar data/qld.json is required
//! re_csv = "data/qld_re.csv"
//!
//! [zones.SYN]
//! fixture = "random-walk"
//! seed = 4
//!
//! [plant]
//! load_kg_per_h = 180.0
//!
//! [[scenarios]]
//! name = "yearly-split"
//! mode = "grid-buy-sell"
//! tc_interval = "yearly"
//! sell_zone = "TAS"
//! buy_zone = "NSW"
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::fixtures::{FixtureKind, FixtureSide};
use super::IngestError;
use crate::types::{CapacitySpec, Geo, GridMode, PlantParameters, ScenarioSpec, TcInterval};
use crate::HOURS_PER_YEAR;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ZoneSource {
    Files {
        grid_csv: PathBuf,
        re_csv: PathBuf,
    },
    Fixture {
        fixture: FixtureKind,
        #[serde(default)]
        side: Option<FixtureSide>,
        /// Overrides the run seed for this zone.
        #[serde(default)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub relative_tolerance: f64,
    pub seed_capacity_kg: f64,
    pub time_limit_s: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 20,
            relative_tolerance: 0.01,
            seed_capacity_kg: 1000.0,
            time_limit_s: None,
        }
    }
}

/// A scenario defined in the config. Unset zones fall back to the config's
/// default zone; setting both `sell_zone` and `buy_zone` to different zones
/// gives a split geography.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub mode: GridMode,
    #[serde(default)]
    pub tc_interval: Option<TcInterval>,
    #[serde(default)]
    pub ei_mef_cap: Option<f64>,
    #[serde(default)]
    pub capex_cap_usd: Option<f64>,
    #[serde(default)]
    pub sell_zone: Option<String>,
    #[serde(default)]
    pub buy_zone: Option<String>,
    #[serde(default)]
    pub capacities: CapacitySpec,
}

impl ScenarioConfig {
    pub fn to_spec(&self, default_zone: &str) -> ScenarioSpec {
        let sell = self.sell_zone.as_deref().unwrap_or(default_zone);
        let buy = self.buy_zone.as_deref().unwrap_or(default_zone);
        let geo = if sell == buy {
            Geo::CoLocated { zone: sell.into() }
        } else {
            Geo::Split {
                sell_zone: sell.into(),
                buy_zone: buy.into(),
            }
        };
        ScenarioSpec {
            name: self.name.clone(),
            mode: self.mode,
            tc_interval: self.tc_interval,
            ei_mef_cap: self.ei_mef_cap,
            capex_cap_usd: self.capex_cap_usd,
            geo,
            capacities: self.capacities,
        }
    }
}

fn default_fx() -> f64 {
    0.7
}

fn default_horizon() -> usize {
    HOURS_PER_YEAR
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub zone: String,
    pub zones: BTreeMap<String, ZoneSource>,
    #[serde(default)]
    pub plant: PlantParameters,
    #[serde(default)]
    pub scenarios: Vec<ScenarioConfig>,
    /// Scenario names run by `suite`; presets or names from `scenarios`.
    #[serde(default)]
    pub suite: Option<Vec<String>>,
    #[serde(default = "default_fx")]
    pub fx_usd_per_aud: f64,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Scenario by name: config-defined scenarios shadow the presets.
    pub fn scenario(&self, name: &str) -> Option<ScenarioSpec> {
        self.scenarios
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.to_spec(&self.zone))
            .or_else(|| ScenarioSpec::preset(name, &self.zone))
    }

    fn check(&self, path: &Path) -> Result<(), IngestError> {
        let fail = |message: String| {
            Err(IngestError::Config {
                path: path.into(),
                message,
            })
        };
        if !self.zones.contains_key(&self.zone) {
            return fail(format!(
                "default zone `{}` is not defined under [zones]",
                self.zone
            ));
        }
        if self.horizon == 0 {
            return fail("horizon must be at least one hour".into());
        }
        if !(self.fx_usd_per_aud.is_finite() && self.fx_usd_per_aud > 0.0) {
            return fail(format!(
                "fx_usd_per_aud must be positive, got {}",
                self.fx_usd_per_aud
            ));
        }
        if let Err(issues) = self.plant.validate() {
            return fail(format!("[plant]: {issues:?}"));
        }
        for s in &self.scenarios {
            for zone in [&s.sell_zone, &s.buy_zone].into_iter().flatten() {
                if !self.zones.contains_key(zone) {
                    return fail(format!("scenario `{}` uses undefined zone `{zone}`", s.name));
                }
            }
            if let Err(e) = s.to_spec(&self.zone).validate() {
                return fail(e.to_string());
            }
        }
        for name in self.suite.iter().flatten() {
            if self.scenario(name).is_none() {
                return fail(format!("suite lists unknown scenario `{name}`"));
            }
        }
        for (name, source) in &self.zones {
            if let ZoneSource::Files { grid_csv, re_csv } = source {
                for f in [grid_csv.clone(), super::sidecar_path(grid_csv), re_csv.clone()] {
                    if !f.is_file() {
                        return fail(format!("zone `{name}`: {} does not exist", f.display()));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses and checks a run configuration, resolving relative paths.
pub fn load_config(path: &Path) -> Result<RunConfig, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::io(path, e))?;
    let mut config: RunConfig = toml::from_str(&text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start].matches('\n').count() + 1);
        let message = match line {
            Some(line) => format!("line {line}: {}", e.message()),
            None => e.message().to_string(),
        };
        IngestError::Config {
            path: path.into(),
            message,
        }
    })?;
    let base = path.parent().unwrap_or(Path::new(""));
    for source in config.zones.values_mut() {
        if let ZoneSource::Files { grid_csv, re_csv } = source {
            *grid_csv = base.join(&*grid_csv);
            *re_csv = base.join(&*re_csv);
        }
    }
    if let Some(dir) = &mut config.output_dir {
        *dir = base.join(&*dir);
    }
    config.check(path)?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, body: &str) -> PathBuf {
        let p = dir.join("run.toml");
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn fixture_config_with_custom_scenario() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            r#"
zone = "buy"
horizon = 168
[zones.buy]
fixture = "two-zone-contrast"
side = "buy"
[zones.sell]
fixture = "two-zone-contrast"
side = "sell"
[plant]
load_kg_per_h = 100.0
[[scenarios]]
name = "split"
mode = "grid-buy-sell"
tc_interval = "yearly"
sell_zone = "sell"
[scenarios.capacities]
electrolyser_kw = { fixed = 9000.0 }
"#,
        );
        let c = load_config(&p).unwrap();
        assert_eq!(c.horizon, 168);
        assert_eq!(c.fx_usd_per_aud, 0.7);
        assert_eq!(c.plant.load_kg_per_h, 100.0);
        assert_eq!(c.plant.hhv, 39.4);
        let s = c.scenario("split").unwrap();
        assert_eq!(
            s.geo,
            Geo::Split {
                sell_zone: "sell".into(),
                buy_zone: "buy".into()
            }
        );
        assert_eq!(s.capacities.electrolyser_kw.bounds(), (9000.0, 9000.0));
        assert_eq!(s.capacities.storage_kg.bounds(), (0.0, f64::INFINITY));
        assert_eq!(c.scenario("daily").unwrap().tc_interval, Some(TcInterval::Daily));
        assert!(c.scenario("nope").is_none());
    }

    #[test]
    fn rejects_unknown_keys_and_missing_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "zone = \"a\"\nhorizn = 5\n[zones.a]\nfixture = \"flat\"\n",
        );
        let err = load_config(&p).unwrap_err().to_string();
        assert!(err.contains("run.toml") && err.contains("line 2"), "{err}");

        let p = write(
            dir.path(),
            "zone = \"a\"\n[zones.a]\ngrid_csv = \"g.csv\"\nre_csv = \"r.csv\"\n",
        );
        let err = load_config(&p).unwrap_err().to_string();
        assert!(err.contains("g.csv"), "{err}");

        let p = write(dir.path(), "zone = \"b\"\n[zones.a]\nfixture = \"flat\"\n");
        assert!(load_config(&p).is_err());

        let p = write(
            dir.path(),
            "zone = \"a\"\nsuite = [\"hourly\", \"weekly\"]\n[zones.a]\nfixture = \"flat\"\n",
        );
        assert!(load_config(&p).unwrap_err().to_string().contains("weekly"));
    }
}
