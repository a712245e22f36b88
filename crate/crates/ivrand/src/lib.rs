//! File formats, sampling, sequence analysis and the command-line front
//! end for `ivrand-core`.

pub mod analyze;
pub mod cli;
pub mod error;
pub mod format;
pub mod sample;

pub use error::{CliError, ExitCode};
