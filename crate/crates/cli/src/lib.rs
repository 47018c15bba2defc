//! Library side of the `krein-complete` command-line tool.

pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

pub use commands::{cmd_complete, cmd_extend, cmd_inertia, cmd_verify, CmdOutput, Options, VerifyArgs};
pub use error::CliError;
pub use report::{render, OutputFormat};
