//! Command-line front end for the `catdilemma` crate: flag and config
//! handling, point files (CSV and JSON lines), coverage and oracle reports,
//! and ternary SVG figures.

pub mod commands;
pub mod config;
pub mod error;
pub mod parallel;
pub mod records;
pub mod svg;

pub use commands::run;
pub use config::{Cli, RunConfig};
pub use error::CliError;
