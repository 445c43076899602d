use num_complex::Complex64;

use super::report::AuditCheck;
use crate::error::QError;
use crate::ramanujan::q1_limit_error;

pub const FINAL_ERROR_LIMIT: f64 = 1e-2;

pub(crate) fn z_label(z: Complex64) -> String {
    match (z.re, z.im) {
        (re, 0.0) => format!("{re}"),
        (0.0, im) => format!("{im}i"),
        (re, im) if im < 0.0 => format!("{re}{im}i"),
        (re, im) => format!("{re}+{im}i"),
    }
}

/// For each `z`, `|A_q((1-q) z) - e^{-z}|` along `q_list` must strictly
/// decrease (a run of exact zeros counts as decreasing) and end below
/// [`FINAL_ERROR_LIMIT`].
pub fn audit_q1_limit(z_list: &[Complex64], q_list: &[f64]) -> Vec<AuditCheck> {
    let mut out = Vec::new();
    for &z in z_list {
        let prefix = format!("q1-limit/z={}", z_label(z));
        let desc = format!("q -> 1 limit of A_q((1-q)z) towards exp(-z) at z = {z}");
        if q_list.is_empty() || q_list.windows(2).any(|w| !(w[0] < w[1])) {
            let e = QError::DomainError("q_list must be nonempty and increasing".into());
            out.push(AuditCheck::from_error(
                format!("{prefix}/monotone"),
                &desc,
                &e,
            ));
            out.push(AuditCheck::from_error(format!("{prefix}/final"), &desc, &e));
            continue;
        }
        let errors: Result<Vec<f64>, QError> =
            q_list.iter().map(|&q| q1_limit_error(z, q)).collect();
        let errors = match errors {
            Ok(e) => e,
            Err(e) => {
                out.push(AuditCheck::from_error(
                    format!("{prefix}/monotone"),
                    &desc,
                    &e,
                ));
                out.push(AuditCheck::from_error(format!("{prefix}/final"), &desc, &e));
                continue;
            }
        };
        let bad_steps = errors
            .windows(2)
            .filter(|w| w[1] > w[0] || (w[1] == w[0] && w[1] > 0.0) || w[1].is_nan())
            .count();
        let listing = q_list
            .iter()
            .zip(&errors)
            .map(|(q, e)| format!("q={q}: {e:.6e}"))
            .collect::<Vec<_>>()
            .join(", ");
        out.push(AuditCheck::new(
            format!("{prefix}/monotone"),
            format!("{desc}: errors strictly decreasing in q ({listing}); measured = non-decreasing steps"),
            bad_steps as f64,
            0.0,
            0.0,
            0.0,
        ));
        let last = *errors.last().expect("q_list is nonempty");
        let scale = (-z).exp().norm();
        out.push(AuditCheck::new(
            format!("{prefix}/final"),
            format!(
                "{desc}: absolute error at q = {} below {FINAL_ERROR_LIMIT:e} (relative to |exp(-z)|: {:.3e})",
                q_list.last().expect("q_list is nonempty"),
                last / scale
            ),
            last,
            0.0,
            FINAL_ERROR_LIMIT,
            0.0,
        ));
    }
    out
}
