//! Command-line front end for `qmlab`: scenario flags or JSON configs in, deterministic
//! JSON or CSV out.
//!
//! Exit codes: 0 success, 1 invalid input, 2 numerical or domain failure.

pub mod args;
mod commands;
mod config;
pub mod output;
pub mod parse;
pub mod regress;

use std::fmt;
use std::fs;

use clap::{CommandFactory, Parser};
use serde_json::{json, Value};

use args::{Cli, Format};
use output::{flatten, render_csv, render_json, Table};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Invalid(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<qmlab::Error> for CliError {
    fn from(e: qmlab::Error) -> Self {
        match e {
            qmlab::Error::Precondition(_) | qmlab::Error::UnsupportedModel(_) => CliError::Invalid(e.to_string()),
            qmlab::Error::Domain(_) | qmlab::Error::Numerical(_) => CliError::Numerical(e.to_string()),
        }
    }
}

/// Result of one subcommand before rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub result: Value,
    pub table: Option<Table>,
    /// Non-fatal notes for the diagnostic stream.
    pub warnings: Vec<String>,
    /// Set when a check-style command found a failing check.
    pub failed: bool,
}

impl Report {
    pub fn new(result: Value) -> Self {
        Self { result, table: None, warnings: Vec::new(), failed: false }
    }
}

/// Rendered output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Applies config text to argv the way `--config FILE` does.
pub fn apply_config_text(argv: Vec<String>, text: &str) -> Result<Vec<String>, CliError> {
    config::merge_config_text(argv, text, &Cli::command())
}

/// Parses argv (including the program name), runs the command and renders its output
/// without touching the process streams, except for writing `--out` files.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let merged = match config::merge_config(argv, &Cli::command()) {
        Ok(a) => a,
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") },
    };
    let cli = match Cli::try_parse_from(&merged) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    if cli.shards == 0 {
        return Outcome { code: 1, stdout: String::new(), stderr: "invalid input: --shards must be positive\n".into() };
    }
    match commands::dispatch(&cli) {
        Ok((name, params, report)) => {
            let mut stderr: String = report.warnings.iter().map(|w| format!("warning: {w}\n")).collect();
            let record = json!({
                "command": name,
                "params": params,
                "seed": cli.seed,
                "shards": cli.shards,
                "result": report.result,
            });
            let text = match cli.format {
                Format::Json => render_json(&record),
                Format::Csv => render_csv(&report.table.clone().unwrap_or_else(|| flatten(&record))),
            };
            let code = if report.failed { 2 } else { 0 };
            if report.failed {
                stderr.push_str("numerical failure: at least one check failed\n");
            }
            match &cli.out {
                Some(path) => match fs::write(path, &text) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr },
                    Err(e) => Outcome {
                        code: 1,
                        stdout: String::new(),
                        stderr: format!("{stderr}invalid input: --out {}: {e}\n", path.display()),
                    },
                },
                None => Outcome { code, stdout: text, stderr },
            }
        }
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") },
    }
}

/// Runs the command line and writes to the process streams. Returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let o = execute(argv);
    print!("{}", o.stdout);
    eprint!("{}", o.stderr);
    o.code
}
