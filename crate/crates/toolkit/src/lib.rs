//! Files, reports and the command line around [`gravity_core`].

pub mod cli;
mod error;
pub mod ingest;
pub mod params_file;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use error::{Result, ToolkitError};
