//! File formats, reports and the command-line front end for `reflsos-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod parse;
pub mod report;
pub mod sdpa;
pub mod suite;

pub use error::{CliError, Result};
