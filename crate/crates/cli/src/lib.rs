//! Library side of the `dpg` experiment front end; the binary is a thin
//! wrapper so integration tests can drive the same code paths.

pub mod checks;
pub mod config;
pub mod runner;

pub use config::{CoefficientSpec, ConfigError, ExperimentConfig, Mode, SolverSection, SourceSpec};
pub use runner::{run, RunOutcome};
