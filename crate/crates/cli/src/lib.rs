//! Command-line front end: `qaudit <audit|eval|table>`.
//!
//! Exit codes: 0 when everything requested passes, 1 on any FAIL or
//! INCONCLUSIVE check or a numerical error, 2 on a usage error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use qaudit_core::audit::{run_full_audit, AuditConfig, AuditReport, Status};
use qaudit_core::Result as QResult;

use crate::commands::CommandError;
use crate::config::{Cli, CliConfig, Command};

pub use crate::config::GRAMMAR;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Produces the audit report; swapped out in tests.
pub trait AuditRunner {
    fn run(&self, cfg: &AuditConfig) -> QResult<AuditReport>;
}

pub struct DefaultRunner;

impl AuditRunner for DefaultRunner {
    fn run(&self, cfg: &AuditConfig) -> QResult<AuditReport> {
        run_full_audit(cfg)
    }
}

/// `argv` includes the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, out, &mut std::io::stderr(), &DefaultRunner)
}

pub fn run_with<I, T>(
    argv: I,
    out: &mut dyn Write,
    err: &mut dyn Write,
    runner: &dyn AuditRunner,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let cfg = match CliConfig::from_cli(cli) {
        Ok(c) => c,
        Err(msg) => return usage_error(err, &msg),
    };
    match execute(&cfg, runner, err) {
        Ok((text, passed)) => match emit(&cfg, &text, out) {
            Ok(()) if passed => EXIT_OK,
            Ok(()) => EXIT_FAIL,
            Err(msg) => {
                let _ = writeln!(err, "error: {msg}");
                EXIT_FAIL
            }
        },
        Err(CommandError::Usage(msg)) => usage_error(err, &msg),
        Err(CommandError::Numerical(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

fn usage_error(err: &mut dyn Write, msg: &str) -> i32 {
    let _ = writeln!(err, "error: {msg}\n\nUsage: {GRAMMAR}");
    EXIT_USAGE
}

fn audit_config(cfg: &CliConfig) -> AuditConfig {
    let mut a = AuditConfig::default();
    if !cfg.q_grid.is_empty() {
        a.q_grid = cfg.q_grid.clone();
    }
    if let Some(t) = cfg.tol {
        a.tol = t;
    }
    if let Some(s) = cfg.seed {
        a.seed = s;
    }
    if let Some(n) = cfg.n_max {
        a.n_max = n;
    }
    if let Some(u) = cfg.u {
        a.u_values = vec![u];
    }
    if let Some(z) = cfg.z {
        a.limit_z = vec![z];
    }
    a
}

/// Rendered output and whether everything passed.
fn execute(
    cfg: &CliConfig,
    runner: &dyn AuditRunner,
    err: &mut dyn Write,
) -> Result<(String, bool), CommandError> {
    let fmt = cfg.output_format;
    match cfg.command {
        Command::Audit => {
            let report = runner.run(&audit_config(cfg))?;
            let _ = writeln!(
                err,
                "{} checks: {} PASS, {} FAIL, {} INCONCLUSIVE",
                report.checks.len(),
                report.count(Status::Pass),
                report.count(Status::Fail),
                report.count(Status::Inconclusive)
            );
            let text = output::render_report(&report, fmt).map_err(CommandError::Usage)?;
            Ok((text, report.all_pass()))
        }
        Command::Eval(target) => {
            let t = commands::eval(target, cfg)?;
            Ok((t.render(fmt).map_err(CommandError::Usage)?, true))
        }
        Command::Table(kind) => {
            let t = commands::table(kind, cfg)?;
            let passed = commands::table_passes(&t);
            Ok((t.render(fmt).map_err(CommandError::Usage)?, passed))
        }
    }
}

fn emit(cfg: &CliConfig, text: &str, out: &mut dyn Write) -> Result<(), String> {
    match &cfg.output_path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))
        }
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}
