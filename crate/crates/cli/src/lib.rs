//! Command-line front end: configuration, execution and CSV/JSON export.

pub mod cli;
pub mod config;
mod error;
pub mod output;
pub mod run;

pub use error::CliError;
