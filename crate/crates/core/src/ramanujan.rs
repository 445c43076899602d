//! Ramanujan's entire function `A_q(z) = sum_k q^{k^2} (-z)^k / (q;q)_k`.
//!
//! Truncation is certified by the ratio bound
//! `rho_k = q^{2k+1} |z| / (1 - q^{k+1})`, which is decreasing in `k`; once
//! `rho_K < 1` the tail after term `K` is at most `|t_K| rho_K / (1 - rho_K)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_tol, QError, Result};
use crate::qcore::series::{powi_units, sum_ratio_series, Ratio, ScaledSum, StopRule};
use crate::qcore::{gamma, ln_qpoch_infinite, CertifiedValue, LogScaled, QParam, EPS};

#[derive(Debug, Clone, Copy)]
pub struct AqRequest<'a> {
    pub z: Complex64,
    pub qp: &'a QParam,
    pub tol: f64,
}

impl<'a> AqRequest<'a> {
    pub fn new(z: Complex64, qp: &'a QParam, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        Ok(Self { z, qp, tol })
    }
}

fn aq_series(z: Complex64, qp: &QParam, stop: StopRule) -> ScaledSum {
    let q = qp.q();
    let az = z.norm();
    sum_ratio_series(
        Complex64::new(1.0, 0.0),
        |k| {
            let q2k1 = qp.pow_int(2 * k as i64 + 1);
            let den = 1.0 - q * qp.pow_int(k as i64);
            let f = q2k1 / den;
            Ratio {
                r: -z * f,
                rho: az * f,
                err_units: powi_units(2 * k as u64 + 1) + powi_units(k as u64 + 1) + 3.0,
            }
        },
        stop,
    )
    // the ratio bound tends to zero, so the loop always terminates for finite z
    .expect("A_q series terminates for finite arguments")
}

/// `A_q(z)` with an absolute truncation tolerance. The returned
/// `tail_bound` covers truncation plus accumulated rounding.
pub fn aq_eval(req: &AqRequest<'_>) -> CertifiedValue<Complex64> {
    if !(req.z.re.is_finite() && req.z.im.is_finite()) {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        return CertifiedValue::new(nan, f64::INFINITY, 1);
    }
    let s = aq_series(req.z, req.qp, StopRule::Absolute(req.tol));
    CertifiedValue::new(s.value(), s.error(), s.terms)
}

/// `A_q(z)` in log-scaled form with a relative error bound; usable where the
/// value itself overflows `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AqScaled {
    pub value: LogScaled<Complex64>,
    /// Bound on `|true - value| / |value|`.
    pub rel_error: f64,
    pub terms_used: usize,
}

pub fn aq_eval_scaled(z: Complex64, qp: &QParam, rel_tol: f64) -> Result<AqScaled> {
    check_tol(rel_tol)?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(QError::DomainError(format!("non-finite argument {z}")));
    }
    let s = aq_series(z, qp, StopRule::Relative(rel_tol));
    Ok(AqScaled {
        value: s.log_scaled(),
        rel_error: s.rel_error(),
        terms_used: s.terms,
    })
}

/// Outcome of comparing a computed magnitude against a closed-form bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    /// `lhs <= rhs` as computed.
    Holds,
    /// `lhs > rhs`, but by less than the combined certified error.
    Inconclusive,
    /// `lhs > rhs` by more than the combined certified error.
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`; infinite with the appropriate sign when either side
    /// overflows.
    pub slack: f64,
    /// Combined certified error of both sides.
    pub margin: f64,
    /// `slack >= -margin`.
    pub holds: bool,
    pub verdict: Verdict,
    pub log_lhs: f64,
    pub log_rhs: f64,
}

impl BoundReport {
    /// Compare `exp(log_lhs)` against `exp(log_rhs)`, each with a relative
    /// error bound.
    pub(crate) fn from_logs(log_lhs: f64, rel_lhs: f64, log_rhs: f64, rel_rhs: f64) -> Self {
        Self::from_logs_shared(0.0, log_lhs, rel_lhs, log_rhs, rel_rhs)
    }

    /// As [`from_logs`](Self::from_logs) for `exp(shared + log_lhs)` against
    /// `exp(shared + log_rhs)`: the common factor cancels exactly, so the
    /// verdict depends only on the reduced sides and their errors.
    pub(crate) fn from_logs_shared(
        shared: f64,
        log_lhs: f64,
        rel_lhs: f64,
        log_rhs: f64,
        rel_rhs: f64,
    ) -> Self {
        let full_lhs = shared + log_lhs;
        let full_rhs = shared + log_rhs;
        let lhs = full_lhs.exp();
        let rhs = full_rhs.exp();
        let slack = if lhs.is_finite() && rhs.is_finite() {
            rhs - lhs
        } else if log_rhs >= log_lhs {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        let margin = lhs * rel_lhs + rhs * rel_rhs;
        let verdict = if log_lhs <= log_rhs {
            Verdict::Holds
        } else {
            let lower_lhs = if rel_lhs >= 1.0 {
                f64::NEG_INFINITY
            } else {
                log_lhs + (-rel_lhs).ln_1p()
            };
            if lower_lhs <= log_rhs + rel_rhs.ln_1p() {
                Verdict::Inconclusive
            } else {
                Verdict::Violated
            }
        };
        Self {
            lhs,
            rhs,
            slack,
            margin,
            holds: verdict != Verdict::Violated,
            verdict,
            log_lhs: full_lhs,
            log_rhs: full_rhs,
        }
    }
}

impl BoundReport {
    /// Settle an inconclusive comparison with an independently computed
    /// `ln rhs - ln lhs = gap` known to within `err`.
    pub(crate) fn refine(mut self, gap: f64, err: f64) -> Self {
        if self.verdict == Verdict::Inconclusive {
            if gap >= err {
                self.verdict = Verdict::Holds;
            } else if gap < -err {
                self.verdict = Verdict::Violated;
            }
            self.holds = self.verdict != Verdict::Violated;
        }
        self
    }
}

const LHS_REL_TOL: f64 = 1e-15;

/// `|A_q(z)| <= exp(q|z| / (1 - q))`.
pub fn check_exp_bound(z: Complex64, qp: &QParam) -> Result<BoundReport> {
    let lhs = aq_eval_scaled(z, qp, LHS_REL_TOL)?;
    let q = qp.q();
    let log_rhs = q * z.norm() / (1.0 - q);
    let rel_rhs = (gamma(4.0) * log_rhs.abs()).exp_m1() + 2.0 * EPS;
    Ok(BoundReport::from_logs(
        lhs.value.log_mag(),
        lhs.rel_error,
        log_rhs,
        rel_rhs,
    ))
}

/// `ln` of `(|z|/sqrt q)^{1/2} exp(-ln^2|z| / (4 ln q)) / (q;q)_inf`, with
/// an absolute error bound on the logarithm.
pub(crate) fn gauss_bound_log(abs_z: f64, qp: &QParam) -> Result<(f64, f64)> {
    let ln_q = qp.ln_q();
    let lz = abs_z.ln();
    let qq_inf = ln_qpoch_infinite(qp.q(), qp, 1e-16)?;
    let a = 0.5 * (lz - 0.5 * ln_q);
    let b = -lz * lz / (4.0 * ln_q);
    let value = a + b - qq_inf.value;
    let err = gamma(8.0) * (a.abs() + b.abs() + qq_inf.value.abs() + lz.abs()) + qq_inf.tail_bound;
    Ok((value, err))
}

/// `|A_q(z)| <= (|z|/sqrt q)^{1/2} exp(-ln^2|z| / (4 ln q)) / (q;q)_inf`
/// for `z != 0`.
pub fn check_gauss_bound(z: Complex64, qp: &QParam) -> Result<BoundReport> {
    let abs_z = z.norm();
    if abs_z == 0.0 {
        return Err(QError::DomainError(
            "the Gaussian-type bound needs z != 0".into(),
        ));
    }
    let lhs = aq_eval_scaled(z, qp, LHS_REL_TOL)?;
    let (log_rhs, err) = gauss_bound_log(abs_z, qp)?;
    Ok(BoundReport::from_logs(
        lhs.value.log_mag(),
        lhs.rel_error,
        log_rhs,
        err.exp_m1() + 2.0 * EPS,
    ))
}

/// `|A_q((1-q) z) - exp(-z)|`.
pub fn q1_limit_error(z: Complex64, q_value: f64) -> Result<f64> {
    let qp = QParam::new(q_value)?;
    let req = AqRequest::new((1.0 - q_value) * z, &qp, 1e-16)?;
    let a = aq_eval(&req).value;
    Ok((a - (-z).exp()).norm())
}
