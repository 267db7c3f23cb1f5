//! Command implementations behind the `qproc` binary.

pub mod commands;
pub mod doc;
pub mod error;
pub mod verify;

pub use error::CliError;
