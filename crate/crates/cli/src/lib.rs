//! Configuration, sweeps and CSV output for the `optomech` command.

pub mod config;
pub mod scenarios;
pub mod schema;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};

pub use config::{resolve, validate_config, ConfigError, Figure, Format, RunConfig, Scenario};
pub use scenarios::run_scenario;
pub use table::ResultTable;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    ModesDisk,
    Thermo,
    Tether,
    Spring,
    Coupling,
    Cavity,
    Budget,
    Figure,
}

#[derive(Debug, Parser)]
#[command(name = "optomech", version, about = "Sweeps and figure data for optically trapped membranes")]
#[command(after_long_help = schema::help_table())]
struct Cli {
    /// Scenario to run.
    #[arg(value_enum)]
    scenario: ScenarioArg,
    /// TOML or JSON configuration file (JSON when the extension is `.json`).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a key, e.g. `--set disk.radius=12e-6`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory; overrides `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Shorthand for `--set figure=<id>`.
    #[arg(long)]
    figure: Option<String>,
}

fn load(cli: &Cli) -> Result<RunConfig, Vec<ConfigError>> {
    let file = match &cli.config {
        Some(path) => {
            let raw = std::fs::read_to_string(path)
                .map_err(|e| vec![ConfigError { key: "<file>".into(), message: format!("{}: {e}", path.display()) }])?;
            config::parse_text(&raw, Format::from_path(path))?
        }
        None => Default::default(),
    };
    let mut overrides = Vec::new();
    let mut errors = Vec::new();
    for raw in &cli.set {
        match config::parse_override(raw) {
            Ok(kv) => overrides.push(kv),
            Err(e) => errors.push(e),
        }
    }
    if let Some(f) = &cli.figure {
        overrides.push(("figure".into(), toml::Value::String(f.clone())));
    }
    let scenario = cli.scenario.to_possible_value().map(|v| v.get_name().to_string());
    let out = cli.out.as_ref().map(|p| p.to_string_lossy().into_owned());
    match resolve(file, &overrides, scenario.as_deref(), out.as_deref()) {
        Ok(cfg) if errors.is_empty() => Ok(cfg),
        Ok(_) => Err(errors),
        Err(mut more) => {
            errors.append(&mut more);
            Err(errors)
        }
    }
}

/// Parse arguments, run, write outputs and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let cfg = match load(&cli) {
        Ok(cfg) => cfg,
        Err(errors) => {
            for e in &errors {
                eprintln!("error: {e}");
            }
            return EXIT_VALIDATION;
        }
    };
    let start = Instant::now();
    let (table, stem) = match run_scenario(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {} failed: {e}", cfg.figure.map_or(cfg.scenario.name(), |f| f.name()));
            return EXIT_SOLVER;
        }
    };
    match table.write(&cfg.output, &stem, &cfg, start.elapsed().as_secs_f64()) {
        Ok(path) => {
            println!("{} rows -> {}", table.rows.len(), path.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: writing {}: {e}", cfg.output.display());
            EXIT_IO
        }
    }
}
