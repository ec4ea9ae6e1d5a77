//! Command-line front end: argument parsing, dispatch over the prime
//! menu, report emission and the optional result cache.

pub mod cache;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use thiserror::Error;

pub use commands::{Cli, Command, Opts};
use report::emit;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] gclh_core::Error),
    #[error("cannot read instance `{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Exit code for a failed run: 3 for an unstabilized limit, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(gclh_core::Error::UnstabilizedLimit { .. })
            | CliError::Core(gclh_core::Error::StabilizationFailure { .. }) => 3,
            _ => 2,
        }
    }
}

/// What a run prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line (including the program name).
pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return RunOutput { code, stdout, stderr };
        }
    };
    let echo: Vec<String> = argv.iter().skip(2).map(|a| a.to_string_lossy().into_owned()).collect();
    let format = cli.command.opts().format.into();
    match commands::execute(&cli.command, echo) {
        Ok(report) => RunOutput {
            code: report.exit_code(),
            stdout: emit(&report, format),
            stderr: String::new(),
        },
        Err(e) => {
            let mut stderr = format!("error: {e}\n");
            if let CliError::Core(gclh_core::Error::UnstabilizedLimit { partial, .. }) = &e {
                let t = report::Table::new("partial table at the last stage", partial);
                report::write_table(&mut stderr, &t);
            }
            RunOutput {
                code: e.exit_code(),
                stdout: String::new(),
                stderr,
            }
        }
    }
}

/// Finds an instance file: the path itself, then with a `.gclh`
/// extension, then inside an `instances` directory.
pub fn resolve_instance(name: &Path) -> PathBuf {
    let mut candidates = vec![name.to_path_buf(), name.with_extension("gclh")];
    if name.is_relative() {
        candidates.push(Path::new("instances").join(name).with_extension("gclh"));
    }
    candidates
        .iter()
        .find(|p| p.is_file())
        .cloned()
        .unwrap_or_else(|| name.to_path_buf())
}
