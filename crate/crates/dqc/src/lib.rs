//! File formats, reports and the command-line front end for `dqc-core`.

pub mod format;
pub mod report;

pub use dqc_core as core;
