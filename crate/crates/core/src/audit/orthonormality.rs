use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::AuditCheck;
use crate::error::{check_tol, QError, Result};
use crate::orthopoly::{im_orthonormal, im_weight_sinh, sw_orthonormal, sw_weight_log};
use crate::qcore::{LogScaled, QParam};
use crate::quadrature::{integrate_log_axis, integrate_sinh_axis, IntegrandSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    IM,
    SW,
}

impl Family {
    fn label(self) -> &'static str {
        match self {
            Family::IM => "im",
            Family::SW => "sw",
        }
    }
}

/// Largest degree the Gram audit accepts.
pub const MAX_GRAM_DEGREE: usize = 8;

fn ln_product(a: f64, b: f64, ln_w: f64) -> LogScaled<f64> {
    if a == 0.0 || b == 0.0 {
        return LogScaled::zero();
    }
    LogScaled::from_parts(a.signum() * b.signum(), a.abs().ln() + b.abs().ln() + ln_w)
}

/// One Gram entry and its quadrature error estimate.
fn gram_entry(family: Family, m: usize, n: usize, qp: &QParam, tol: f64) -> Result<(f64, f64)> {
    let r = match family {
        Family::IM => {
            let spec = IntegrandSpec::new(
                |p| {
                    ln_product(
                        im_orthonormal(m, p.t, qp),
                        im_orthonormal(n, p.t, qp),
                        im_weight_sinh(p.t, qp).log_value,
                    )
                },
                -4.0 / qp.ln_q(),
            );
            integrate_sinh_axis(&spec, tol)?
        }
        Family::SW => {
            let spec = IntegrandSpec::new(
                |p| {
                    ln_product(
                        sw_orthonormal(m, p.t, qp),
                        sw_orthonormal(n, p.t, qp),
                        sw_weight_log(p.t, qp).log_value,
                    )
                },
                -1.0 / qp.ln_q(),
            );
            integrate_log_axis(&spec, tol)?
        }
    };
    Ok((r.value, r.error_estimate))
}

/// `max |G - I|` for the orthonormal family of degrees `0..=max_degree`
/// under its weight.
pub fn audit_orthonormality(
    family: Family,
    max_degree: usize,
    qp: &QParam,
    tol: f64,
) -> Result<Vec<AuditCheck>> {
    check_tol(tol)?;
    if max_degree > MAX_GRAM_DEGREE {
        return Err(QError::OutOfRange(format!(
            "Gram audit supports degrees up to {MAX_GRAM_DEGREE}, got {max_degree}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..=max_degree)
        .flat_map(|m| (m..=max_degree).map(move |n| (m, n)))
        .collect();
    let entries = pairs
        .par_iter()
        .map(|&(m, n)| gram_entry(family, m, n, qp, 0.1 * tol).map(|e| (m, n, e)))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = (0, 0, 0.0f64);
    let mut numerical_error = 0.0f64;
    for &(m, n, (g, err)) in &entries {
        let target = if m == n { 1.0 } else { 0.0 };
        let d = (g - target).abs();
        if d > worst.2 || d.is_nan() {
            worst = (m, n, d);
        }
        numerical_error = numerical_error.max(err);
    }
    let (name, weight) = match family {
        Family::IM => ("Ismail-Masson", "w_IM"),
        Family::SW => ("Stieltjes-Wigert", "w_SW"),
    };
    Ok(vec![AuditCheck::new(
        format!(
            "orthonormality/{}/q={}/max-degree={max_degree}",
            family.label(),
            qp.q()
        ),
        format!(
            "{name} Gram matrix under {weight}, degrees 0..={max_degree}: max |G - I| \
             (worst entry ({}, {}))",
            worst.0, worst.1
        ),
        worst.2,
        0.0,
        tol,
        numerical_error,
    )])
}
