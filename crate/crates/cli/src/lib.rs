//! Batch front end: JSON run configurations in, JSON and CSV reports out.
//!
//! Exit status of the binary: 0 when every evaluated condition holds, 1 when
//! at least one is violated, 2 on configuration or I/O errors.

pub mod bundle;
pub mod config;
pub mod jsonfmt;
pub mod run;

pub use bundle::{Format, ReportBundle, CSV_HEADER};
pub use config::{BatchSpec, Command, RunConfig};
pub use run::{run, Outcome, RunOptions};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("output error: {0}")]
    Output(String),
    #[error(transparent)]
    Library(#[from] macroreal::Error),
}
