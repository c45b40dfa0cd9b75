//! Sweep runner behind the `qthermo` command-line tool.

pub mod compare;
pub mod config;
pub mod report;
pub mod sweep;

pub use compare::{compare_to_oracle, ComparisonSummary};
pub use config::{RunConfig, ConfigError};
pub use report::{emit_report, Report};
pub use sweep::{run_sweep, SweepError};
