//! Large-degree brackets against their `A_q` limits and published envelopes.

use num_complex::Complex64;

use super::integrals::qq_inf;
use super::report::AuditCheck;
use crate::error::{QError, Result};
use crate::orthopoly::{
    im_orthonormal_scaled_bracket, sw_orthonormal_scaled_bracket, IMScalingPoint, SWScalingPoint,
};
use crate::qcore::{qpoch_infinite, CertifiedValue, QParam};
use crate::ramanujan::{aq_eval, AqRequest};

fn aq_real(z: f64, qp: &QParam) -> Result<CertifiedValue<f64>> {
    let v = aq_eval(&AqRequest::new(Complex64::new(z, 0.0), qp, 1e-16)?);
    Ok(v.map(|c| c.re))
}

struct Residual {
    n: usize,
    measured: f64,
    envelope: f64,
    numerical_error: f64,
}

fn check_validity(u: f64) -> Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(QError::DomainError(format!("u must be positive, got {u}")));
    }
    Ok(())
}

fn im_residual(
    n: usize,
    u: f64,
    qp: &QParam,
    constant: f64,
    limit: &CertifiedValue<f64>,
) -> Result<Residual> {
    let p = IMScalingPoint::new(n, 0.5, Complex64::new(u, 0.0), qp)?;
    let b = im_orthonormal_scaled_bracket(&p, qp)?;
    let nf = n as f64;
    let ln_q = qp.ln_q();
    let second = (nf * nf / 4.0 * ln_q - (2.0 * (n / 2) as f64 + 2.0) * u.ln()).exp();
    let envelope = constant * ((nf / 2.0 * ln_q).exp() + second);
    Ok(Residual {
        n,
        measured: (b.value - limit.value).abs(),
        envelope,
        numerical_error: b.tail_bound + limit.tail_bound + 1e-14 * envelope,
    })
}

fn sw_residual(
    n: usize,
    u: f64,
    qp: &QParam,
    constant: f64,
    limit: f64,
    limit_err: f64,
) -> Result<Residual> {
    let p = SWScalingPoint::new(n, 2.0, Complex64::new(u, 0.0), qp)?;
    let b = sw_orthonormal_scaled_bracket(&p, qp)?;
    let nf = n as f64;
    let ln_q = qp.ln_q();
    let second = (nf * nf / 4.0 * ln_q - (1.0 + (n / 2) as f64) * u.ln()).exp();
    let envelope = constant * ((nf / 2.0 * ln_q).exp() + second);
    Ok(Residual {
        n,
        measured: (b.value - limit).abs(),
        envelope,
        numerical_error: b.tail_bound + limit_err + 1e-14 * envelope,
    })
}

fn assemble(
    family: &str,
    bracket_desc: &str,
    u: f64,
    qp: &QParam,
    n_list: &[usize],
    residual: impl Fn(usize) -> Result<Residual>,
) -> Vec<AuditCheck> {
    let prefix = format!("{family}-asymptotic/q={}/u={u}", qp.q());
    let mut out = Vec::new();
    for &n in n_list {
        let id = format!("{prefix}/n={n:02}");
        match residual(n) {
            Ok(r) => {
                out.push(AuditCheck::new(
                    id,
                    format!("{bracket_desc} at n = {}: |residual| <= envelope", r.n),
                    r.measured,
                    0.0,
                    r.envelope,
                    r.numerical_error,
                ));
            }
            Err(e) => out.push(AuditCheck::from_error(id, bracket_desc, &e)),
        }
    }
    out
}

fn constants(qp: &QParam) -> Result<(f64, f64)> {
    let qq = qq_inf(qp)?;
    let q = qp.q();
    let neg_q3 = qpoch_infinite(Complex64::new(-q * q * q, 0.0), qp, 1e-16)?
        .value
        .re;
    Ok((qq, neg_q3))
}

/// Ismail-Masson brackets at `t = 1/2` against `A_q(u^{-2})`, with envelope
/// `4 (-q^3;q)_inf A_q(-u^{-2}) / (q;q)_inf^2 * (q^{n/2} + q^{n^2/4} u^{-2 floor(n/2) - 2})`.
pub fn audit_im_asymptotic(n_list: &[usize], u: f64, qp: &QParam) -> Vec<AuditCheck> {
    let id = format!("im-asymptotic/q={}/u={u}/setup", qp.q());
    let setup = check_validity(u).and_then(|_| {
        let (qq, neg_q3) = constants(qp)?;
        let limit = aq_real(u.powi(-2), qp)?;
        let dominant = aq_real(-u.powi(-2), qp)?;
        Ok((4.0 * neg_q3 * dominant.value / (qq * qq), limit))
    });
    match setup {
        Ok((constant, limit)) => assemble(
            "im",
            "Ismail-Masson bracket against A_q(u^-2)",
            u,
            qp,
            n_list,
            |n| im_residual(n, u, qp, constant, &limit),
        ),
        Err(e) => vec![AuditCheck::from_error(
            id,
            "Ismail-Masson envelope constants",
            &e,
        )],
    }
}

/// Stieltjes-Wigert brackets at `t = 2` against `A_q(1/u) / (q;q)_inf`, with
/// envelope `2 (-q^3;q)_inf A_q(-1/u) / (q;q)_inf^2 * (q^{n/2} + q^{n^2/4} u^{-1 - floor(n/2)})`.
pub fn audit_sw_asymptotic(n_list: &[usize], u: f64, qp: &QParam) -> Vec<AuditCheck> {
    let id = format!("sw-asymptotic/q={}/u={u}/setup", qp.q());
    let setup = check_validity(u).and_then(|_| {
        let (qq, neg_q3) = constants(qp)?;
        let limit = aq_real(1.0 / u, qp)?;
        let dominant = aq_real(-1.0 / u, qp)?;
        Ok((
            2.0 * neg_q3 * dominant.value / (qq * qq),
            limit.value / qq,
            limit.tail_bound / qq + 1e-15 * (limit.value / qq).abs(),
        ))
    });
    match setup {
        Ok((constant, limit, limit_err)) => assemble(
            "sw",
            "Stieltjes-Wigert bracket against A_q(1/u)/(q;q)_inf",
            u,
            qp,
            n_list,
            |n| sw_residual(n, u, qp, constant, limit, limit_err),
        ),
        Err(e) => vec![AuditCheck::from_error(
            id,
            "Stieltjes-Wigert envelope constants",
            &e,
        )],
    }
}
