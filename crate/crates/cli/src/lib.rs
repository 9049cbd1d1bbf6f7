//! Configuration, suites and report output of the `pblab` command.

pub mod config;
pub mod output;
pub mod suites;

pub use config::{parse_config, parse_config_str, ConfigError, OutputFormat, RunConfig};
pub use suites::{run_all_parallel, run_suite, Suite};
