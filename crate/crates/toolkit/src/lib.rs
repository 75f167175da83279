//! Verification runs over the antisurgery local models: configuration,
//! JSON reports with per-check provenance, and SVG/CSV slice figures.

pub mod commands;
pub mod config;
pub mod error;
pub mod figure;
pub mod report;

pub use config::RunConfig;
pub use error::CliError;
pub use report::{Check, Expected, Report, Source};
