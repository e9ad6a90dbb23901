//! Command-line front end for `mwsieve-core`: curve and generator files,
//! a per-prime cache, obstruction certificates and the `mwsieve` binary.

pub mod cache;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod format;
pub mod record;

pub use cli::run;
pub use error::{CliError, Result};
