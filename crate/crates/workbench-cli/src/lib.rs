//! Document-driven front end for the workbench: parse a JSON document,
//! resolve its declarations, run its commands and report.

pub mod document;
pub mod dot;
pub mod error;
pub mod report;
pub mod resolve;
pub mod run;

pub use error::{CliError, Result};
pub use run::{run_text, RunOptions, RunOutput};
