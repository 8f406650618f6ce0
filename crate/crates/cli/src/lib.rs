//! Configuration, initial data and subcommand drivers for the `nsgeom`
//! binary. Every subcommand writes its report to a caller-supplied writer
//! and returns an [`Outcome`], so the binary only maps results to exit codes.

pub mod commands;
pub mod config;
pub mod error;
pub mod init;

pub use config::{parse_config, ConfigError, InitKind, RunConfig};
pub use error::{CliError, CliResult, Outcome};
pub use init::init_field;
