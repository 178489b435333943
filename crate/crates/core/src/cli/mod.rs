//! Config-driven runner: parses a TOML configuration, runs experiments and
//! writes JSON and CSV reports plus a manifest.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for
//! configuration or validation errors.

mod config;
mod run;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Parser;
use serde::Serialize;
use serde_json::json;

pub use config::{
    apply_override, parse_config, validate_config, ConvergeSection, CounterexampleCase, ExpSumSection, Experiment,
    KernelSection, LabConfig, RandomizeSection, StrichartzSection,
};
pub use run::{run_experiment, Check, ExperimentOutput};

use crate::error::LabError;
use crate::randomization::RandomSeedPair;

/// Environment variable capping the worker threads; `--threads` wins.
pub const THREADS_ENV: &str = "BOUSSINESQ_LAB_THREADS";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_CONFIG: i32 = 2;

#[derive(Debug, Clone, Parser)]
#[command(name = "boussinesq-lab", version, about = "Boussinesq propagator experiments")]
pub struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    pub experiment: Experiment,
    /// TOML configuration; built-in defaults when absent.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed of the function randomization and system construction.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Seed of the eigenvalue randomization.
    #[arg(long)]
    pub seed2: Option<u64>,
    /// Worker threads.
    #[arg(long)]
    pub threads: Option<usize>,
    /// `section.key=value`, applied after the file; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Frequency cutoffs for expsum and strichartz, comma separated.
    #[arg(long = "N", value_delimiter = ',', allow_hyphen_values = true)]
    pub n_list: Option<Vec<i64>>,
}

/// Record of a run; everything except `duration_secs` is reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config_path: Option<String>,
    pub out_dir: String,
    pub seeds: RandomSeedPair,
    pub version: String,
    pub files: Vec<String>,
    pub passed: bool,
    pub duration_secs: f64,
}

/// Reads the configuration and applies the command-line overrides.
pub fn load_config(args: &Args) -> Result<LabConfig, String> {
    let text = match &args.config {
        Some(path) => fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?,
        None => String::new(),
    };
    let mut overrides = args.overrides.clone();
    if let Some(s) = args.seed {
        overrides.push(format!("seed={s}"));
    }
    if let Some(s) = args.seed2 {
        overrides.push(format!("seed2={s}"));
    }
    if let Some(ns) = &args.n_list {
        let list = ns.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ");
        for section in ["expsum", "strichartz"] {
            overrides.push(format!("{section}.n_list=[{list}]"));
        }
    }
    parse_config(&text, &overrides)
}

fn thread_count(args: &Args) -> Result<Option<usize>, String> {
    if let Some(n) = args.threads {
        return Ok(Some(n));
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("{THREADS_ENV}={v:?} is not a thread count")),
        Err(_) => Ok(None),
    }
}

fn write_outputs(
    out: &Path,
    outputs: &[ExperimentOutput],
    seeds: RandomSeedPair,
    cfg: &LabConfig,
) -> std::io::Result<Vec<String>> {
    fs::create_dir_all(out)?;
    let mut files = Vec::new();
    let config_echo = serde_json::to_value(cfg).unwrap_or(serde_json::Value::Null);
    for o in outputs {
        let name = o.experiment.name();
        let report = json!({
            "experiment": name,
            "seeds": seeds,
            "config": config_echo[name],
            "checks": o.checks,
            "passed": o.passed(),
            "results": o.results,
        });
        let file = format!("{name}.json");
        fs::write(out.join(&file), serde_json::to_string_pretty(&report)? + "\n")?;
        files.push(file);
        for (suffix, bytes) in &o.tables {
            let file = if suffix.is_empty() { format!("{name}.csv") } else { format!("{name}_{suffix}.csv") };
            fs::write(out.join(&file), bytes)?;
            files.push(file);
        }
    }
    Ok(files)
}

fn exit_code_for(e: &LabError) -> i32 {
    match e {
        LabError::Inadmissible(_)
        | LabError::InvalidExponent(_)
        | LabError::OutOfRange(_)
        | LabError::BudgetExceeded(_)
        | LabError::BeyondNyquist { .. }
        | LabError::KernelTooLarge { .. } => EXIT_BAD_CONFIG,
        _ => EXIT_CHECK_FAILED,
    }
}

/// Runs the requested experiments and returns the process exit code.
pub fn run(args: &Args) -> i32 {
    let start = Instant::now();
    let cfg = match load_config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_CONFIG;
        }
    };
    let violations = cfg.violations_for(args.experiment);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("invalid configuration: {v}");
        }
        return EXIT_BAD_CONFIG;
    }
    let threads = match thread_count(args) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_BAD_CONFIG;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return EXIT_BAD_CONFIG;
        }
    };

    let mut outputs = Vec::new();
    for e in args.experiment.expand() {
        match pool.install(|| run_experiment(e, &cfg)) {
            Ok(o) => {
                for c in &o.checks {
                    println!("{} {}: {} ({})", if c.passed { "PASS" } else { "FAIL" }, e.name(), c.name, c.detail);
                }
                outputs.push(o);
            }
            Err(err) => {
                eprintln!("error in {}: {err}", e.name());
                return exit_code_for(&err);
            }
        }
    }

    let passed = outputs.iter().all(|o| o.passed());
    let mut files = match write_outputs(&args.out, &outputs, cfg.seeds(), &cfg) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: cannot write reports to {}: {e}", args.out.display());
            return EXIT_CHECK_FAILED;
        }
    };
    files.push("manifest.json".into());
    let manifest = RunManifest {
        experiment: args.experiment.name().to_string(),
        config_path: args.config.as_ref().map(|p| p.display().to_string()),
        out_dir: args.out.display().to_string(),
        seeds: cfg.seeds(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        files,
        passed,
        duration_secs: start.elapsed().as_secs_f64(),
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    if let Err(e) = fs::write(args.out.join("manifest.json"), text) {
        eprintln!("error: cannot write manifest: {e}");
        return EXIT_CHECK_FAILED;
    }
    if passed {
        EXIT_PASS
    } else {
        for o in &outputs {
            for c in o.checks.iter().filter(|c| !c.passed) {
                eprintln!("check failed: {}: {} ({})", o.experiment.name(), c.name, c.detail);
            }
        }
        EXIT_CHECK_FAILED
    }
}

/// Parses `std::env::args` and runs; usage errors exit with code 2.
pub fn main_from_env() -> i32 {
    run(&Args::parse())
}
