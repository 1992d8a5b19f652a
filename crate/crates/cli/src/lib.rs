//! Command-line companion: table generation, file output and the
//! verification suite, on top of the `ggue-core` kernels.

pub mod cache;
pub mod checks;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
