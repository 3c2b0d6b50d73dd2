//! `hydrogrid`: size, dispatch and certify grid-connected hydrogen plants.
//!
//! Exit codes: 0 optimal, 1 input or solver error, 2 infeasible, 3 unbounded.
//! Suites and sweeps write every report first and then exit with the code of
//! the first failed scenario, if any.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use hydrogrid_core::ingest::{
    load_config, synth_fixture, write_grid_profile, write_json, write_re_profile, write_sweep_csv,
    FixtureKind, RunConfig,
};
use hydrogrid_core::lp::LpStatus;
use hydrogrid_core::runner::{
    preset_suite, run_scenario, run_suite, scenario_report, suite_report, sweep_geo, sweep_re_factor,
    sweep_report, write_scenario_files, Overrides, RunContext, RunError, ScenarioOutcome,
};
use hydrogrid_core::ScenarioSpec;

#[derive(Parser)]
#[command(
    name = "hydrogrid",
    version,
    about = "Hybrid grid-connected hydrogen plant optimisation"
)]
struct Cli {
    /// Output directory (default: the config's output_dir, else ./out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Horizon in hours; profiles must have exactly this many rows
    #[arg(long, global = true)]
    horizon: Option<usize>,

    /// Seed for synthetic fixtures
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write every LP built to <out>/lp/ in CPLEX LP format
    #[arg(long, global = true)]
    export_lp: bool,

    /// USD per AUD used to convert spot prices
    #[arg(long, global = true)]
    fx: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimise and certify one scenario
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Preset name or a scenario defined in the config
        #[arg(long)]
        scenario: String,
    },
    /// Run the off-grid design, then every suite scenario under its CAPEX
    Suite {
        #[arg(long)]
        config: PathBuf,
    },
    /// Sweep the RE factor at the off-grid electrolyser size
    SweepRe {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        points: usize,
        /// Zone to sweep (default: the config's zone)
        #[arg(long)]
        zone: Option<String>,
    },
    /// Place the RE in each sell zone under yearly temporal correlation
    SweepGeo {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        sell_zones: Vec<String>,
        /// Zone hosting the electrolyser (default: the config's zone)
        #[arg(long)]
        buy_zone: Option<String>,
    },
    /// Write a synthetic fixture as profile CSVs with sidecars
    Synth {
        /// flat, diurnal, random-walk or two-zone-contrast
        #[arg(long)]
        fixture: FixtureKind,
    },
}

fn exit_code(status: Option<LpStatus>) -> u8 {
    match status {
        Some(LpStatus::Infeasible) => 2,
        Some(LpStatus::Unbounded) => 3,
        _ => 1,
    }
}

fn outcome_code<'a>(outcomes: impl IntoIterator<Item = &'a ScenarioOutcome>) -> u8 {
    outcomes
        .into_iter()
        .find_map(|o| o.as_ref().err())
        .map_or(0, |e| exit_code(e.lp_status()))
}

struct Run {
    config: RunConfig,
    ctx: RunContext,
    out: PathBuf,
}

impl Run {
    fn load(cli: &Cli, config_path: &Path) -> Result<Self> {
        let config = load_config(config_path)?;
        let out = cli
            .out
            .clone()
            .or_else(|| config.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        let overrides = Overrides {
            horizon: cli.horizon,
            seed: cli.seed,
            fx_usd_per_aud: cli.fx,
            export_lp_dir: cli.export_lp.then(|| out.join("lp")),
        };
        let ctx = RunContext::from_config(&config, &overrides)?;
        std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
        Ok(Self { config, ctx, out })
    }

    fn zone_or_default(&self, zone: Option<&String>) -> Result<String> {
        let zone = zone.cloned().unwrap_or_else(|| self.config.zone.clone());
        if !self.ctx.zones.contains_key(&zone) {
            bail!("unknown zone `{zone}`");
        }
        Ok(zone)
    }
}

fn solve(run: &Run, name: &str) -> Result<u8> {
    let spec = run
        .config
        .scenario(name)
        .with_context(|| format!("unknown scenario `{name}`"))?;
    let outcome = run_scenario(&run.ctx, &spec);
    let report = scenario_report(&run.ctx, &spec, &outcome, Vec::new());
    write_scenario_files(&run.out, &report, &outcome)?;
    match &outcome {
        Ok(r) => println!(
            "{name}: LCOH {:.4} USD/kg, EI_Market {:.3}, EI_MEF {:.3} kgCO2e/kgH2",
            r.solution.costs.lcoh_usd_per_kg, r.emissions.ei_market, r.emissions.ei_mef
        ),
        Err(e) => eprintln!("{e}"),
    }
    Ok(outcome_code([&outcome]))
}

fn suite(run: &Run) -> Result<u8> {
    let specs: Vec<ScenarioSpec> = match &run.config.suite {
        Some(names) => names.iter().filter_map(|n| run.config.scenario(n)).collect(),
        None => preset_suite(&run.config.zone),
    };
    let outcome = run_suite(&run.ctx, &specs);
    let report = suite_report(&run.ctx, &outcome);
    let dir = run.out.join("scenarios");
    for ((_, o), r) in outcome.results.iter().zip(&report.scenarios) {
        write_scenario_files(&dir, r, o)?;
    }
    write_json(&report, &run.out.join("suite.json"))?;
    for row in &report.rows {
        match row.lcoh_usd_per_kg {
            Some(lcoh) => println!("{:<14} LCOH {lcoh:>9.4} USD/kg", row.scenario),
            None => println!("{:<14} {}", row.scenario, row.status),
        }
    }
    Ok(outcome_code(outcome.results.iter().map(|(_, o)| o)))
}

fn sweep(
    run: &Run,
    kind: &str,
    outcome: Result<hydrogrid_core::runner::SweepOutcome, RunError>,
) -> Result<u8> {
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return Ok(exit_code(e.lp_status()));
        }
    };
    let report = sweep_report(&run.ctx, kind, &outcome);
    write_json(&report, &run.out.join(format!("sweep_{kind}.json")))?;
    write_sweep_csv(&report.points, &run.out.join(format!("sweep_{kind}.csv")))?;
    for p in &report.points {
        match p.lcoh_usd_per_kg {
            Some(lcoh) => println!("{:<12} LCOH {lcoh:>9.4} USD/kg", p.label),
            None => println!("{:<12} {}", p.label, p.status),
        }
    }
    if let Some((lo, hi)) = report.rec_band_usd_per_kg {
        println!("grid baseline with RECs: {lo:.4}-{hi:.4} USD/kg");
    }
    Ok(outcome_code(outcome.points.iter().map(|p| &p.outcome)))
}

fn synth(cli: &Cli, kind: FixtureKind) -> Result<u8> {
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    let fixture = synth_fixture(kind, cli.horizon.unwrap_or(8760), cli.seed.unwrap_or(0));
    let fx = cli.fx.unwrap_or(0.7);
    for zone in &fixture.zones {
        let stem = &zone.grid.zone_id;
        write_grid_profile(&zone.grid, &out.join(format!("{stem}.csv")), fx)?;
        write_re_profile(&zone.ref_wind, &zone.ref_pv, &out.join(format!("{stem}_re.csv")))?;
        println!("wrote {stem}.csv, {stem}.json, {stem}_re.csv");
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Solve { config, scenario } => solve(&Run::load(cli, config)?, scenario),
        Command::Suite { config } => suite(&Run::load(cli, config)?),
        Command::SweepRe { config, points, zone } => {
            if *points == 0 {
                bail!("--points must be at least 1");
            }
            let run = Run::load(cli, config)?;
            let zone = run.zone_or_default(zone.as_ref())?;
            let outcome = sweep_re_factor(&run.ctx, &zone, *points);
            sweep(&run, "re", outcome)
        }
        Command::SweepGeo {
            config,
            sell_zones,
            buy_zone,
        } => {
            let run = Run::load(cli, config)?;
            let buy = run.zone_or_default(buy_zone.as_ref())?;
            let outcome = sweep_geo(&run.ctx, &buy, sell_zones);
            sweep(&run, "geo", outcome)
        }
        Command::Synth { fixture } => synth(cli, *fixture),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
