//! File formats, parallel enumeration and the `extcalc` command line on top
//! of `extcalc-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod parallel;
pub mod random;
pub mod report;

pub use error::{CliError, Result};
