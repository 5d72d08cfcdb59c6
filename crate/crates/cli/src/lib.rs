//! The `frenet-kit` command-line tool: JSON ingestion, configuration and reports around
//! `frenet-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod report;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const ERROR: i32 = 1;
    /// Some frame level diverged.
    pub const DIVERGED: i32 = 2;
}

pub use commands::run;
