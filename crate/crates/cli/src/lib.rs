//! Experiment driver for the `floquet-krylov` library: TOML configs, parameter
//! grids, named presets and deterministic CSV / JSON-lines output.

pub mod app;
pub mod config;
pub mod error;
pub mod presets;
pub mod run;
pub mod table;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use table::{Format, Table, Value};
