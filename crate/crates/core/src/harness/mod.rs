//! Configuration, seeded parallel Monte-Carlo execution and report output
//! for the command-line experiments.
pub mod config;
pub mod experiments;
pub mod output;
pub mod runner;

pub use config::{
    CalibrationTarget, CodeConfig, CodeFamily, CrcKind, DecoderConfig, DecoderKind, ExperimentConfig,
    ExperimentKind, FrozenConfig, GldpcConfig, Stopping,
};
pub use experiments::{run_experiment, ExperimentOutput};
pub use output::{CalibrationRow, CsvRow, McdeRow, OracleRow, CSV_HEADER};
