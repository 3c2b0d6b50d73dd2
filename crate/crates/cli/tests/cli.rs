use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const ZONES: &str = r#"
zone = "flat"
horizon = 24

[zones.flat]
fixture = "flat"
"#;

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("run.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_hydrogrid"))
        .arg("--out")
        .arg(dir.join("out"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap()
}

#[test]
fn solve_writes_report_and_dispatch() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        ZONES,
        &["--export-lp", "solve", "--scenario", "off-grid"],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let report = fs::read_to_string(dir.path().join("out/off-grid.json")).unwrap();
    assert!(report.contains("\"schema_version\": 1"));
    assert!(report.contains("\"lcoh_usd_per_kg\""));

    let dispatch = fs::read_to_string(dir.path().join("out/off-grid_dispatch.csv")).unwrap();
    assert_eq!(dispatch.lines().count(), 25);

    let lp_dir = dir.path().join("out/lp");
    let lp = fs::read_dir(&lp_dir).unwrap().next().unwrap().unwrap().path();
    let text = fs::read_to_string(lp).unwrap();
    assert!(text.starts_with("\\") || text.starts_with("Minimize") || text.contains("Subject To"));
    assert!(text.trim_end().ends_with("End"));
}

#[test]
fn plant_without_capacity_exits_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        "{ZONES}
[[scenarios]]
name = \"dead\"
mode = \"off-grid\"
capacities = {{ wind_kw = {{ fixed = 0.0 }}, pv_kw = {{ fixed = 0.0 }}, electrolyser_kw = {{ fixed = 0.0 }}, storage_kg = {{ fixed = 0.0 }} }}
"
    );
    let out = run(dir.path(), &config, &["solve", "--scenario", "dead"]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = fs::read_to_string(dir.path().join("out/dead.json")).unwrap();
    assert!(report.contains("\"infeasible\""));
}

#[test]
fn bad_input_exits_one_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        "zone = \"flat\"\nhorizon = \"long\"\n",
        &["solve", "--scenario", "off-grid"],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("run.toml") && err.contains("line 2"), "{err}");

    let out = run(dir.path(), ZONES, &["solve", "--scenario", "no-such-scenario"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn synthesised_csvs_solve_and_bad_rows_are_located() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let synth = Command::new(env!("CARGO_BIN_EXE_hydrogrid"))
        .args(["--horizon", "24", "--out"])
        .arg(&data)
        .args(["synth", "--fixture", "flat"])
        .output()
        .unwrap();
    assert_eq!(
        synth.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&synth.stderr)
    );

    let grid = fs::read_dir(&data)
        .unwrap()
        .map(|e| e.unwrap().path())
        .find(|p| p.extension().is_some_and(|x| x == "csv") && !p.to_string_lossy().ends_with("_re.csv"))
        .unwrap();
    let re = grid.with_file_name(format!("{}_re.csv", grid.file_stem().unwrap().to_string_lossy()));
    let config = format!(
        "zone = \"z\"\nhorizon = 24\n[zones.z]\ngrid_csv = {:?}\nre_csv = {:?}\n",
        grid.display(),
        re.display()
    );

    let out = run(dir.path(), &config, &["solve", "--scenario", "flexible"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let text = fs::read_to_string(&grid).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut fields: Vec<&str> = lines[3].split(',').collect();
    fields[1] = "abc";
    lines[3] = fields.join(",");
    fs::write(&grid, lines.join("\n") + "\n").unwrap();

    let out = run(dir.path(), &config, &["solve", "--scenario", "flexible"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("{}:4:", grid.display())), "{err}");
}
