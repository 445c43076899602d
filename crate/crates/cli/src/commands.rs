//! `eval` and `table` commands.

use num_complex::Complex64;
use qaudit_core::audit::{audit_im_asymptotic, audit_sw_asymptotic, Status, FINAL_ERROR_LIMIT};
use qaudit_core::orthopoly::{
    im_orthonormal_scaled_bracket, sw_orthonormal_scaled_bracket, IMScalingPoint, SWScalingPoint,
};
use qaudit_core::qcore::qpoch_infinite;
use qaudit_core::ramanujan::{aq_eval, q1_limit_error, AqRequest};
use qaudit_core::{QError, QParam};

use crate::config::{CliConfig, EvalTarget, TableKind};
use crate::output::{Cell, Table};

pub const DEFAULT_Q: f64 = 0.5;
pub const DEFAULT_N_MAX: usize = 40;
const DEFAULT_EVAL_TOL: f64 = 1e-16;
const LIMIT_Q: [f64; 3] = [0.9, 0.99, 0.999];

/// Failure of a command after its arguments were accepted.
#[derive(Debug)]
pub enum CommandError {
    /// Arguments that parse but do not make sense together.
    Usage(String),
    Numerical(QError),
}

impl From<QError> for CommandError {
    fn from(e: QError) -> Self {
        CommandError::Numerical(e)
    }
}

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Usage(msg.into())
}

fn qparam(cfg: &CliConfig) -> Result<QParam, CommandError> {
    let q = cfg.single_q(DEFAULT_Q).map_err(usage)?;
    Ok(QParam::new(q)?)
}

pub fn eval(target: EvalTarget, cfg: &CliConfig) -> Result<Table, CommandError> {
    let qp = qparam(cfg)?;
    let name = Cell::Text(format!("{target:?}").to_lowercase());
    match target {
        EvalTarget::Aq | EvalTarget::Qpoch => {
            let z = cfg.z.ok_or_else(|| usage("this target needs --z"))?;
            let tol = cfg.tol.unwrap_or(DEFAULT_EVAL_TOL);
            let v = if target == EvalTarget::Aq {
                aq_eval(&AqRequest::new(z, &qp, tol)?)
            } else {
                qpoch_infinite(z, &qp, tol)?
            };
            Ok(Table {
                columns: vec![
                    "target",
                    "q",
                    "z_re",
                    "z_im",
                    "value_re",
                    "value_im",
                    "tail_bound",
                    "terms_used",
                ],
                rows: vec![vec![
                    name,
                    Cell::Num(qp.q()),
                    Cell::Num(z.re),
                    Cell::Num(z.im),
                    Cell::Num(v.value.re),
                    Cell::Num(v.value.im),
                    Cell::Num(v.tail_bound),
                    Cell::Int(v.terms_used as u64),
                ]],
            })
        }
        EvalTarget::ImBracket | EvalTarget::SwBracket => {
            let n = cfg.n_max.unwrap_or(DEFAULT_N_MAX);
            let u = cfg.u.unwrap_or(1.0);
            let uc = Complex64::new(u, 0.0);
            let (b, limit) = if target == EvalTarget::ImBracket {
                let p = IMScalingPoint::new(n, 0.5, uc, &qp)?;
                let lim = aq_eval(&AqRequest::new(
                    Complex64::new(u.powi(-2), 0.0),
                    &qp,
                    1e-16,
                )?);
                (im_orthonormal_scaled_bracket(&p, &qp)?, lim.value.re)
            } else {
                let p = SWScalingPoint::new(n, 2.0, uc, &qp)?;
                let lim = aq_eval(&AqRequest::new(Complex64::new(1.0 / u, 0.0), &qp, 1e-16)?);
                let qq = qpoch_infinite(Complex64::new(qp.q(), 0.0), &qp, 1e-16)?;
                (
                    sw_orthonormal_scaled_bracket(&p, &qp)?,
                    lim.value.re / qq.value.re,
                )
            };
            Ok(Table {
                columns: vec!["target", "q", "n", "u", "value", "tail_bound", "limit"],
                rows: vec![vec![
                    name,
                    Cell::Num(qp.q()),
                    Cell::Int(n as u64),
                    Cell::Num(u),
                    Cell::Num(b.value),
                    Cell::Num(b.tail_bound),
                    Cell::Num(limit),
                ]],
            })
        }
    }
}

/// `4, 8, ..., n_max`, or just degree 0 when `n_max < 4`.
pub fn table_degrees(n_max: usize) -> Vec<usize> {
    let v: Vec<usize> = (4..=n_max).step_by(4).collect();
    if v.is_empty() {
        vec![0]
    } else {
        v
    }
}

pub fn table(kind: TableKind, cfg: &CliConfig) -> Result<Table, CommandError> {
    match kind {
        TableKind::AsymptoticIm | TableKind::AsymptoticSw => {
            let qp = qparam(cfg)?;
            let degrees = table_degrees(cfg.n_max.unwrap_or(DEFAULT_N_MAX));
            let checks = if kind == TableKind::AsymptoticIm {
                audit_im_asymptotic(&degrees, cfg.u.unwrap_or(2.0), &qp)
            } else {
                audit_sw_asymptotic(&degrees, cfg.u.unwrap_or(1.5), &qp)
            };
            let mut rows = Vec::new();
            for (n, c) in degrees
                .iter()
                .zip(checks.iter().filter(|c| c.id.contains("/n=")))
            {
                rows.push(vec![
                    Cell::Int(*n as u64),
                    Cell::Num(c.measured),
                    Cell::Num(c.tolerance),
                    Cell::Text(c.status.to_string()),
                ]);
            }
            if rows.len() != degrees.len() {
                let why = checks
                    .first()
                    .map(|c| c.description.clone())
                    .unwrap_or_default();
                return Err(usage(format!("could not build the table: {why}")));
            }
            Ok(Table {
                columns: vec!["n", "measured", "envelope", "status"],
                rows,
            })
        }
        TableKind::LimitQ1 => {
            let z = cfg.z.unwrap_or(Complex64::new(1.0, 0.0));
            let q_list = if cfg.q_grid.is_empty() {
                LIMIT_Q.to_vec()
            } else {
                cfg.q_grid.clone()
            };
            if q_list.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(usage("limit-q1 needs increasing --q values"));
            }
            let mut rows = Vec::new();
            let mut prev = f64::INFINITY;
            for (i, &q) in q_list.iter().enumerate() {
                let e = q1_limit_error(z, q)?;
                let mut bound = prev;
                if i + 1 == q_list.len() {
                    bound = bound.min(FINAL_ERROR_LIMIT);
                }
                let ok = e == 0.0 || e < bound;
                rows.push(vec![
                    Cell::Num(q),
                    Cell::Num(e),
                    Cell::Num(bound),
                    Cell::Text(if ok { Status::Pass } else { Status::Fail }.to_string()),
                ]);
                prev = e;
            }
            Ok(Table {
                columns: vec!["q", "measured", "bound", "status"],
                rows,
            })
        }
    }
}

/// Whether every row of a table carries a PASS status (tables without a
/// status column pass trivially).
pub fn table_passes(t: &Table) -> bool {
    match t.columns.iter().position(|c| *c == "status") {
        Some(i) => t
            .rows
            .iter()
            .all(|r| r[i] == Cell::Text(Status::Pass.to_string())),
        None => true,
    }
}
