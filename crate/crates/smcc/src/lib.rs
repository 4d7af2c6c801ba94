//! File formats, a thread-pool executor, the experiment runner and the
//! verification suites for `smcc-core`. The `smcc` binary is a thin command
//! line over this crate.

pub mod config;
mod error;
pub mod exec;
pub mod io;
pub mod report;
pub mod runner;
pub mod suites;

pub use error::{Error, Result};
