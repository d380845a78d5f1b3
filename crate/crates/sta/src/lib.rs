//! Scenario runner for `sta-core`: JSON configuration, CSV output and the
//! invariant self-check suite behind the `sta` command.

pub mod check;
pub mod config;
pub mod csv;
mod error;
pub mod scenarios;

pub use config::{AtomConfig, CheckConfig, OscillatorConfig, Params, RunConfig, Scenario};
pub use error::{ShellError, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERICAL};
