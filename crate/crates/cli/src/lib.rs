//! Experiment runner, file formats and random instances for `logbm-core`.

pub mod error;
pub mod io;
pub mod random;
pub mod sweep;

pub use error::{CliError, Result};
pub use sweep::{run_experiment, Check, ExperimentConfig, Row, Summary, SweepReport, Tolerances};
