//! Session files and the `expmap` command line.

pub mod commands;
pub mod report;
pub mod session;
