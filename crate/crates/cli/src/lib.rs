//! Library behind the `vi` command: instance files, run reports and the
//! command implementations, usable without spawning the binary.

// `!(v >= 0)` style tests are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod instance;
pub mod report;
pub mod reproduce;

pub use cli::run;
pub use instance::InstanceFile;
pub use report::{RunReport, Status};
