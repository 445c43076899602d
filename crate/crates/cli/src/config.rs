use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

pub const GRAMMAR: &str = "qaudit <audit|eval|table> [--q <f64>]... [--tol <f64>] [--seed <u64>] \
[--n-max <int>] [--u <f64>] [--z <re[,im]>] [--format json|csv] [--out <path>]";

#[derive(Debug, Parser)]
#[command(name = "qaudit", version, about = "Audit and evaluate q-series identities", override_usage = GRAMMAR)]
pub(crate) struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub(crate) enum CommandArgs {
    /// Run the full audit and emit a report.
    Audit(CommonArgs),
    /// Evaluate one function at one point.
    Eval {
        target: EvalTarget,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit a plot-ready table.
    Table {
        kind: TableKind,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args)]
pub(crate) struct CommonArgs {
    /// Base q in (0, 1); repeat for a grid.
    #[arg(long = "q")]
    pub q: Vec<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub u: Option<f64>,
    /// Complex argument as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Option<Complex64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalTarget {
    /// Ramanujan's function A_q(z).
    Aq,
    /// The infinite product (z;q)_inf.
    Qpoch,
    /// Ismail-Masson bracket at t = 1/2, degree --n-max, point --u.
    ImBracket,
    /// Stieltjes-Wigert bracket at t = 2, degree --n-max, point --u.
    SwBracket,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    AsymptoticIm,
    AsymptoticSw,
    LimitQ1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Audit,
    Eval(EvalTarget),
    Table(TableKind),
}

/// Validated command-line configuration. Unset options stay `None` so each
/// command can apply its own default.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    pub q_grid: Vec<f64>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub n_max: Option<usize>,
    pub u: Option<f64>,
    pub z: Option<Complex64>,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl CliConfig {
    pub(crate) fn from_cli(cli: Cli) -> Result<Self, String> {
        let (command, a) = match cli.command {
            CommandArgs::Audit(a) => (Command::Audit, a),
            CommandArgs::Eval { target, common } => (Command::Eval(target), common),
            CommandArgs::Table { kind, common } => (Command::Table(kind), common),
        };
        if let Some(q) = a.q.iter().find(|q| !(**q > 0.0 && **q < 1.0)) {
            return Err(format!("--q must lie in (0, 1), got {q}"));
        }
        if let Some(t) = a.tol.filter(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(format!("--tol must be positive, got {t}"));
        }
        if let Some(u) = a.u.filter(|u| !(u.is_finite() && *u > 0.0)) {
            return Err(format!("--u must be positive, got {u}"));
        }
        Ok(Self {
            command,
            q_grid: a.q,
            tol: a.tol,
            seed: a.seed,
            n_max: a.n_max,
            u: a.u,
            z: a.z,
            output_format: a.format,
            output_path: a.out,
        })
    }

    /// The single `q` used by `eval` and the asymptotic tables.
    pub fn single_q(&self, default: f64) -> Result<f64, String> {
        match self.q_grid.as_slice() {
            [] => Ok(default),
            [q] => Ok(*q),
            _ => Err("this command takes a single --q".into()),
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("invalid number {t:?}: {e}"))
    };
    let z = match s.split_once(',') {
        Some((re, im)) => Complex64::new(parse(re)?, parse(im)?),
        None => Complex64::new(parse(s)?, 0.0),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(format!("z must be finite, got {s}"));
    }
    Ok(z)
}
