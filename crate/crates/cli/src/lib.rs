//! Command-line front end: cube files, compression sweeps, snapshots,
//! example verification and kernel benchmarks.

pub mod bench;
pub mod commands;
pub mod cube;
pub mod error;
pub mod maps;
pub mod ppm;
pub mod verify;

pub use error::{CliError, Result};
