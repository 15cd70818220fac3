//! Configuration and artifact plumbing behind the `stwave` binary.

pub mod config;
pub mod run;
