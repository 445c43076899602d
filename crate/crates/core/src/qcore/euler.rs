//! Euler's two product/series identities and the q-binomial theorem.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::certified::CertifiedValue;
use super::param::QParam;
use super::pochhammer::qpoch_infinite;
use super::series::{powi_units, sum_ratio_series, Ratio, StopRule};
use crate::error::{check_tol, QError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EulerKind {
    /// `(z;q)_inf = sum_k q^{k(k-1)/2} (-z)^k / (q;q)_k`
    ProductSeries,
    /// `1/(z;q)_inf = sum_k z^k / (q;q)_k`, needs `|z| < 1`
    ReciprocalSeries,
}

pub fn euler_expand(
    z: Complex64,
    qp: &QParam,
    kind: EulerKind,
    tol: f64,
) -> Result<CertifiedValue<Complex64>> {
    check_tol(tol)?;
    let q = qp.q();
    let az = z.norm();
    let s = match kind {
        EulerKind::ProductSeries => sum_ratio_series(
            Complex64::new(1.0, 0.0),
            |k| {
                let qk = qp.pow_int(k as i64);
                let den = 1.0 - q * qk;
                Ratio {
                    r: -z * (qk / den),
                    rho: az * qk / den,
                    err_units: powi_units(k as u64 + 1) + 3.0,
                }
            },
            StopRule::Absolute(tol),
        )?,
        EulerKind::ReciprocalSeries => {
            if !(az < 1.0) {
                return Err(QError::NonConvergent(format!(
                    "reciprocal Euler series needs |z| < 1, got {az}"
                )));
            }
            sum_ratio_series(
                Complex64::new(1.0, 0.0),
                |k| {
                    let den = 1.0 - qp.pow_int(k as i64 + 1);
                    Ratio {
                        r: z / den,
                        rho: az / den,
                        err_units: powi_units(k as u64 + 1) + 2.0,
                    }
                },
                StopRule::Absolute(tol),
            )?
        }
    };
    Ok(CertifiedValue::new(s.value(), s.error(), s.terms))
}

/// `|(az;q)_inf/(z;q)_inf - sum_k (a;q)_k z^k/(q;q)_k|` with both sides
/// truncated at `tol`.
pub fn qbinom_theorem_residual(a: Complex64, z: Complex64, qp: &QParam, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let az = z.norm();
    if !(az < 1.0) {
        return Err(QError::NonConvergent(format!(
            "q-binomial theorem needs |z| < 1, got {az}"
        )));
    }
    let q = qp.q();
    let num = qpoch_infinite(a * z, qp, tol)?;
    let den = qpoch_infinite(z, qp, tol)?;
    let lhs = num.value / den.value;

    let abs_a = a.norm();
    let series = sum_ratio_series(
        Complex64::new(1.0, 0.0),
        |k| {
            let qk = qp.pow_int(k as i64);
            let den = 1.0 - q * qk;
            Ratio {
                r: (1.0 - a * qk) * z / den,
                rho: (1.0 + abs_a * qk) * az / den,
                err_units: powi_units(k as u64 + 1) + 6.0,
            }
        },
        StopRule::Absolute(tol),
    )?;
    Ok((lhs - series.value()).norm())
}
