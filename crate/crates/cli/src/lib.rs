//! Command-line front end for the `elemhyp` library.

pub mod args;
pub mod commands;
pub mod json;
pub mod report;
pub mod suite;

pub use commands::{run, CliError, Outcome};
