//! Experiment runner for twisted Toeplitz spectra.
//!
//! Every subcommand reads a flat `key = value` config (see [`config`]), lets command-line
//! flags override individual keys, and writes CSV tables, an SVG scatter plot, the canonical
//! config echo `config.txt` and `metrics.json` into its output directory. Rerunning from an
//! echoed config reproduces the CSV files byte for byte.

pub mod config;
pub mod error;
pub mod figure;
pub mod io;
pub mod run;
pub mod svg;
pub mod tables;

pub use config::{ConfigError, ExperimentConfig, Mode, SymbolSpec};
pub use error::{CliError, CliResult};
pub use figure::{reproduce_figure, FigureId, FigureReport};
pub use run::{run_experiment, RunMetrics, RunReport};
