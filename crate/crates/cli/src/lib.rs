//! Configuration, orchestration and file output for the `tclaser` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod manifest;
pub mod run;

pub use config::{parse_config, Command, ConfigErrors, RunConfig};
pub use run::{exit_code, run, RunError, RunOutcome, RunStatus};
