//! Command-line front end for the algebroid engine: model files, commands and reports.

pub mod args;
pub mod commands;
pub mod model;
pub mod report;

use algebroid_core::Error as CoreError;
use thiserror::Error;

pub use args::Cli;
pub use model::{dump, load_model, Model, ModelFile};
pub use report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {location}: {msg}")]
    Parse { location: String, msg: String },
    #[error("validation error in {item}: {error}")]
    Validation { item: String, error: CoreError },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

/// Result of one invocation: what goes to stdout and stderr, and the exit code.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs the command line `args` (without the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let argv = std::iter::once(std::ffi::OsString::from("algebroid")).chain(args);
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: e.to_string(), code: 2 }
            } else {
                Outcome { stdout: e.to_string(), stderr: String::new(), code: 0 }
            };
        }
    };
    commands::execute(&cli, echo)
}
