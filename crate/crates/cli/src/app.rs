//! Command-line surface: argument definitions and dispatch.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, Model, CONFIG_KEYS};
use crate::error::{CliError, CliResult};
use crate::presets::{self, PRESETS};
use crate::run::{run_calibration, run_complexity, run_spectral, run_sweep, RunOutput};
use crate::table::{emit, write_table, Format, Table, Value};

#[derive(Debug, Parser)]
#[command(
    name = "floquet-krylov",
    version,
    about = "Spread complexity and level statistics of kicked Floquet models",
    after_long_help = CONFIG_KEYS
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spread complexity / entropy time series, Arnoldi coefficients and per-run summary
    Complexity(Options),
    /// Quasi-energy ratio statistic, η and optional spacing histograms
    Spectral(Options),
    /// Per-point summary over one or two swept couplings, with a rescaled companion table
    Sweep(Options),
    /// Monte Carlo ⟨r̃⟩ for Poisson phases and GOE spectra
    CalibrateRmt(Options),
    /// List the named presets, or print one as TOML with --preset
    Presets(Options),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// TOML experiment config (see `--help` for keys)
    #[arg(long, conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Named preset: fig1..fig9, figA, figC
    #[arg(long)]
    pub preset: Option<String>,
    /// Output file; extra tables go next to it as <stem>.<table>.<ext>. Defaults to stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for random initial states and calibration (overrides the config)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Parameter points evaluated in parallel (overrides the config)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Overwrite existing output files
    #[arg(long)]
    pub force: bool,
    /// Override any config key, e.g. --set couplings.phi=0.5 (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

/// Config from `--config` or `--preset`, with flag overrides applied.
pub fn resolve_config(opts: &Options, required: bool) -> CliResult<ExperimentConfig> {
    let mut config = match (&opts.config, &opts.preset) {
        (Some(path), _) => ExperimentConfig::load_with(path, &opts.overrides)?,
        (None, Some(name)) => presets::find(name)
            .ok_or_else(|| CliError::Config(format!("unknown preset `{name}`; run `presets` for the list")))?
            .config()
            .with_overrides(&opts.overrides)?,
        (None, None) if required => {
            return Err(CliError::Config("pass --config <file> or --preset <name>".into()))
        }
        (None, None) => ExperimentConfig::new(Model::KickedIsing).with_overrides(&opts.overrides)?,
    };
    if let Some(seed) = opts.seed {
        config.set_seed(seed);
    }
    if let Some(w) = opts.workers {
        config.workers = Some(w);
    }
    Ok(config)
}

fn preset_output(opts: &Options) -> CliResult<RunOutput> {
    if opts.preset.is_some() {
        let config = resolve_config(opts, true)?;
        let mut table = Table::new("config", &["toml"]);
        table.push(vec![Value::Text(config.to_toml()?)]);
        return Ok(RunOutput { tables: vec![table], warnings: Vec::new() });
    }
    let mut table = Table::new("presets", &["name", "command", "description"]);
    for p in PRESETS {
        table.push(vec![p.name.into(), p.command.into(), p.description.into()]);
    }
    Ok(RunOutput { tables: vec![table], warnings: Vec::new() })
}

/// Runs one subcommand and returns its tables without writing them.
pub fn execute(command: &Command) -> CliResult<RunOutput> {
    match command {
        Command::Complexity(o) => run_complexity(&resolve_config(o, true)?),
        Command::Spectral(o) => run_spectral(&resolve_config(o, true)?),
        Command::Sweep(o) => run_sweep(&resolve_config(o, true)?),
        Command::CalibrateRmt(o) => run_calibration(&resolve_config(o, false)?),
        Command::Presets(o) => preset_output(o),
    }
}

pub fn options(command: &Command) -> &Options {
    match command {
        Command::Complexity(o)
        | Command::Spectral(o)
        | Command::Sweep(o)
        | Command::CalibrateRmt(o)
        | Command::Presets(o) => o,
    }
}

/// Executes `cli`, writes its output and returns warnings for stderr.
pub fn run(cli: &Cli) -> CliResult<Vec<String>> {
    let opts = options(&cli.command);
    let output = execute(&cli.command)?;
    let mut warnings = output.warnings;
    // `presets --preset x` prints the bare TOML, not a table
    if let (Command::Presets(_), Some(_)) = (&cli.command, &opts.preset) {
        let Value::Text(text) = &output.tables[0].rows[0][0] else { unreachable!() };
        match &opts.output {
            Some(path) => {
                let mut f = std::fs::OpenOptions::new();
                f.write(true);
                if opts.force { f.create(true).truncate(true); } else { f.create_new(true); }
                f.open(path)
                    .and_then(|mut file| file.write_all(text.as_bytes()))
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            }
            None => print!("{text}"),
        }
        return Ok(warnings);
    }
    match &opts.output {
        Some(path) => {
            emit(&output.tables, opts.format, path, opts.force)?;
        }
        None => {
            let stdout = std::io::stdout();
            write_table(&output.tables[0], opts.format, stdout.lock())?;
            for t in &output.tables[1..] {
                warnings.push(format!("table `{}` not written; pass --output to save it", t.name));
            }
        }
    }
    Ok(warnings)
}
