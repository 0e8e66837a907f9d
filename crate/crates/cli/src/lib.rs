//! Scenario-driven verification front end for the `qtangent` engine.

pub mod commands;
pub mod scenario;

pub use commands::{run, Command, Options, RunReport, Status};
pub use scenario::Scenario;

/// Exit code for a run whose checks all pass.
pub const EXIT_PASS: i32 = 0;
/// Exit code when at least one check fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for usage, parse and validation errors.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at line {line}, column {column} (field `{path}`): {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("scenario has no `{0}` section")]
    MissingSection(&'static str),
    #[error(transparent)]
    Engine(#[from] qtangent::Error),
}
