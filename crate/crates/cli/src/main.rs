// SPDX-License-Identifier: Apache-2.0

//! `umarkov <cost|analyze|simulate|verify> [--gate NAME | --unitary FILE]
//! [--d INT] [--vlist FILE] [--tol FLOAT] [--out FILE] [--verbose]`
//!
//! Exit codes: 0 success, 1 internal or output error, 2 malformed input,
//! 3 non-unitary input, 4 protocol stage precondition, 5 inequality
//! violation.

mod commands;
mod config;
mod failure;

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use umarkov::json::canonicalize;

use crate::config::{Cli, RunConfig};
use crate::failure::Failure;

fn render(v: serde_json::Value) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(&canonicalize(v)).map_err(|e| Failure::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let (kind, opts) = cli.command.split();
    let cfg = RunConfig::resolve(kind, opts)?;
    let report = commands::run(&cfg)?;
    let text = render(report.json)?;
    match &cfg.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))?;
            println!("{}", report.summary);
        }
        None if report.json_to_stdout => {
            print!("{text}");
            eprintln!("{}", report.summary);
        }
        None => println!("{}", report.summary),
    }
    if report.violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Violations(report.violations))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("umarkov: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
