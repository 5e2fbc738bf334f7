//! Command-line front end: point queries, grid scans and verification suites.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod scan;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::config::{ConfigFile, Settings};
use crate::error::{exit, CliResult};
use crate::scan::ScanJob;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(&cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult<i32> {
    let file = match &cli.global.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let settings = Settings::resolve(&cli.global, &file, |k| std::env::var(k).ok())?;
    let code = match &cli.command {
        Command::Order(p) => commands::order(p, &settings, out)?,
        Command::Scan(args) => {
            let job = ScanJob::resolve(args, &file, &settings)?;
            let summary = job.run(&settings.pool()?, out)?;
            eprintln!(
                "scan: {} pairs, {} rows total, {} incomplete{}",
                summary.pairs,
                summary.rows,
                summary.incomplete,
                if summary.interrupted { ", stopped early" } else { "" }
            );
            exit::OK
        }
        Command::Verify(args) => commands::verify(args, &file, &settings, out)?,
        Command::SunitTheta(args) => commands::sunit_theta(args, &settings, out)?,
        Command::CrtClass(args) => commands::crt(args, &settings, out)?,
        Command::BoundReport(p) => commands::bound_report(p, &settings, out)?,
    };
    out.flush()?;
    Ok(code)
}
