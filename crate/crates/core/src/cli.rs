//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 no feasible county.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use log::{error, info};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::analysis::{
    dispatch_csv, heatmap_csv, heatmap_geojson, pearson_sensitivity, penetration_sweep,
    sensitivity_csv, sweep_csv, SweepScope,
};
use crate::error::{Error, Result};
use crate::ingest::{hex, load_dataset, CountyRegistry};
use crate::model::{build_subproblem, BuildMode};
use crate::scenario::Scenario;
use crate::siting::{evaluate_all, SolveOptions};
use crate::solver::{write_mps, MilpOptions, MpsFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "siteopt", version, about = "County-level data-center siting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve every county, select the cheapest and write the result tables.
    Run(Common),
    /// Re-solve over a list of penetration fractions.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated ascending fractions, e.g. 0,0.25,0.5.
        #[arg(long = "b", value_name = "LIST")]
        b: String,
        /// Re-solve every county instead of only the selected ones.
        #[arg(long)]
        all: bool,
    },
    /// Pearson correlation of each cost component with the objective.
    Sensitivity(Common),
    /// Write one county's model as MPS.
    ExportMps {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        county: String,
        /// Free-format MPS with the model's own names. Fixed format renames
        /// columns and rows to fit eight characters.
        #[arg(long)]
        free: bool,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub scenario: PathBuf,
    /// Directory with counties.csv, profiles.csv and optional fiber_nodes.csv, load.csv.
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "sized")]
    pub mode: BuildMode,
    /// Comma-separated fips to keep.
    #[arg(long, value_delimiter = ',')]
    pub counties: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Relative MIP gap.
    #[arg(long, default_value_t = 1e-4)]
    pub gap: f64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            error!("{e}");
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

/// Installs the logger, filtered by `SITEOPT_LOG` (default `warn`).
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or("SITEOPT_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

struct Inputs {
    scenario: Scenario,
    registry: CountyRegistry,
    /// (file name, sha256) of every input file read.
    files: Vec<(String, String)>,
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex(&Sha256::digest(bytes)))
}

fn load_inputs(common: &Common) -> Result<Inputs> {
    let mut scenario = Scenario::from_path(&common.scenario)?;
    let mut files = vec![("scenario".to_string(), sha256_file(&common.scenario)?)];
    if !common.data.is_dir() {
        return Err(Error::io(
            &common.data,
            std::io::Error::new(std::io::ErrorKind::NotFound, "data directory not found"),
        ));
    }
    let dataset = load_dataset(&common.data, &scenario.county_defaults)?;
    for name in ["counties.csv", "profiles.csv", "fiber_nodes.csv", "load.csv"] {
        let path = common.data.join(name);
        if path.exists() {
            files.push((name.to_string(), sha256_file(&path)?));
        }
    }
    if let Some(load) = dataset.it_load {
        scenario.load.hourly_it_mwh = load;
        scenario.validate()?;
    }
    let mut registry = dataset.registry;
    if !common.counties.is_empty() {
        registry.retain(&common.counties)?;
    }
    if registry.is_empty() {
        return Err(Error::invalid("counties", "no counties to evaluate"));
    }
    Ok(Inputs {
        scenario,
        registry,
        files,
    })
}

fn solve_options(common: &Common) -> Result<SolveOptions> {
    if common.gap.is_nan() || common.gap < 0.0 {
        return Err(Error::invalid("gap", "must be nonnegative"));
    }
    Ok(SolveOptions {
        mode: common.mode,
        milp: MilpOptions {
            gap: common.gap,
            ..MilpOptions::default()
        },
        jobs: common.jobs.max(1),
    })
}

fn write(out: &Path, name: &str, body: &str) -> Result<()> {
    let path = out.join(name);
    fs::write(&path, body).map_err(|e| Error::io(&path, e))
}

fn prepare_out(out: &Path) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))
}

/// Parses a comma-separated list of penetration fractions.
pub fn parse_b_list(text: &str) -> Result<Vec<f64>> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| Error::invalid("b", format!("`{s}` is not a nonnegative number")))
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("b", "values must be ascending"));
    }
    Ok(values)
}

fn execute(command: &Command) -> Result<i32> {
    match command {
        Command::Run(common) => cmd_run(common),
        Command::Sweep { common, b, all } => {
            let b_values = parse_b_list(b)?;
            let inputs = load_inputs(common)?;
            let opts = solve_options(common)?;
            prepare_out(&common.out)?;
            let scope = if *all { SweepScope::All } else { SweepScope::Best };
            let points = penetration_sweep(&inputs.scenario, &inputs.registry, &b_values, scope, &opts)?;
            write(&common.out, "sweep.csv", &sweep_csv(&points)?)?;
            Ok(if points.iter().all(|p| p.objective.is_none()) {
                EXIT_INFEASIBLE
            } else {
                EXIT_OK
            })
        }
        Command::Sensitivity(common) => {
            let inputs = load_inputs(common)?;
            let opts = solve_options(common)?;
            prepare_out(&common.out)?;
            let result = evaluate_all(&inputs.scenario, &inputs.registry, &opts)?;
            if result.infeasible_everywhere {
                return Ok(EXIT_INFEASIBLE);
            }
            let map = pearson_sensitivity(&result)?;
            write(&common.out, "sensitivity.csv", &sensitivity_csv(&map)?)?;
            Ok(EXIT_OK)
        }
        Command::ExportMps { common, county, free } => {
            let inputs = load_inputs(common)?;
            let record = inputs.registry.get(county).ok_or_else(|| Error::Lookup {
                kind: "county",
                key: county.clone(),
            })?;
            let model = build_subproblem(&inputs.scenario, record, common.mode)?;
            let text = if *free {
                write_mps(&model, &model.name, MpsFormat::Free)?
            } else {
                write_mps(&model.with_short_names(), &format!("C{county}"), MpsFormat::Fixed)?
            };
            prepare_out(&common.out)?;
            write(&common.out, &format!("{county}.mps"), &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn cmd_run(common: &Common) -> Result<i32> {
    let started = Instant::now();
    let inputs = load_inputs(common)?;
    let loaded = started.elapsed();
    let opts = solve_options(common)?;
    prepare_out(&common.out)?;
    let result = evaluate_all(&inputs.scenario, &inputs.registry, &opts)?;
    let solved = started.elapsed();

    write(&common.out, "heatmap.csv", &heatmap_csv(&result, &inputs.registry)?)?;
    let geojson = serde_json::to_string_pretty(&heatmap_geojson(&result, &inputs.registry))?;
    write(&common.out, "heatmap.geojson", &(geojson + "\n"))?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "fips", "name", "objective", "gap"])?;
    for (rank, fips) in result.selected.iter().enumerate() {
        let c = result.county(fips).expect("selected county solved");
        let name = inputs.registry.get(fips).map(|r| r.name.as_str()).unwrap_or("");
        w.write_record([
            (rank + 1).to_string(),
            fips.clone(),
            name.to_string(),
            format!("{}", c.objective.unwrap_or(f64::NAN)),
            format!("{}", c.gap),
        ])?;
        if let Some(d) = &c.dispatch {
            write(&common.out, &format!("dispatch_{fips}.csv"), &dispatch_csv(d)?)?;
        }
    }
    let selected = String::from_utf8(w.into_inner().map_err(|e| Error::Solver(e.to_string()))?)
        .expect("csv output is utf-8");
    write(&common.out, "selected.csv", &selected)?;

    let files: serde_json::Map<String, serde_json::Value> =
        inputs.files.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    let mut input_hash = Sha256::new();
    for (name, digest) in &inputs.files {
        input_hash.update(name.as_bytes());
        input_hash.update(digest.as_bytes());
    }
    let manifest = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "fingerprint": hex(&input_hash.finalize()),
        "scenario_fingerprint": hex(&Sha256::digest(inputs.scenario.canonical_json())),
        "registry_fingerprint": inputs.registry.fingerprint(),
        "input_files": files,
        "mode": common.mode,
        "counties": inputs.registry.len(),
        "selected": result.selected,
        "aggregate_objective": result.aggregate_objective,
        "infeasible_everywhere": result.infeasible_everywhere,
        "timings_s": {
            "load": loaded.as_secs_f64(),
            "solve": (solved - loaded).as_secs_f64(),
            "total": started.elapsed().as_secs_f64(),
        },
    });
    write(
        &common.out,
        "run_manifest.json",
        &(serde_json::to_string_pretty(&manifest)? + "\n"),
    )?;
    info!(
        "wrote results for {} counties to {}",
        result.counties.len(),
        common.out.display()
    );
    if result.infeasible_everywhere {
        error!("no county has a feasible solution");
        return Ok(EXIT_INFEASIBLE);
    }
    Ok(EXIT_OK)
}
