//! Configuration and command implementations behind the `extmfs` binary.

pub mod commands;
pub mod config;
