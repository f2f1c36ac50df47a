//! Configuration, dispatch and report emission behind the `exlab` binary.

pub mod config;
pub mod run;
