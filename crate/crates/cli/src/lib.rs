//! Command-line front end for `hrg`: configuration, file formats and the
//! subcommands behind the `hrg` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

pub use commands::{run, Cli, Command};
pub use config::{GeneratorChoice, Overrides, RunConfig};
pub use error::CliError;
