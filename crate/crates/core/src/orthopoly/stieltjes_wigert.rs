use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ismail_masson::finish_bracket;
use super::{
    ln_u, parity, positive_real, refined_log_gap, sum_log_terms, unit_power, validate_t,
    validate_u, Advised, LogMonomial, LogTerm, ScaledEval,
};
use crate::error::{QError, Result};
use crate::qcore::sum::{ComplexSum, NeumaierSum};
use crate::qcore::{gamma, ln_qpoch_infinite, CertifiedValue, LogScaled, QParam, EPS};
use crate::ramanujan::{aq_eval_scaled, BoundReport, Verdict};

/// The point `x_n(t, u) = q^{-nt} u`, stored in log-scaled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SWScalingPoint {
    pub n: usize,
    pub t: f64,
    pub u: Complex64,
    pub x_n: LogScaled<Complex64>,
}

impl SWScalingPoint {
    pub fn new(n: usize, t: f64, u: Complex64, qp: &QParam) -> Result<Self> {
        validate_t(t)?;
        validate_u(u)?;
        Ok(Self {
            n,
            t,
            u,
            x_n: Self::scaled_x(n, t, u, qp),
        })
    }

    /// `q^{-nt} u` as `LogScaled(q^{-nt}) * LogScaled(u)`.
    pub fn scaled_x(n: usize, t: f64, u: Complex64, qp: &QParam) -> LogScaled<Complex64> {
        let shift = LogScaled::from_parts(Complex64::new(1.0, 0.0), -(n as f64) * t * qp.ln_q());
        shift * LogScaled::from_value(u)
    }
}

/// `S_n(x; q) = sum_k q^{k^2} (-x)^k / ((q;q)_k (q;q)_{n-k})`, summed by the
/// term ratio `-x q^{2k+1} (1 - q^{n-k}) / (1 - q^{k+1})`.
pub fn sw_eval_direct(n: usize, x: Complex64, qp: &QParam) -> Advised<Complex64> {
    let q = qp.q();
    let mut term = Complex64::new(1.0 / qp.qq(n), 0.0);
    let mut acc = ComplexSum::new();
    for k in 0..=n {
        acc.add(term);
        if k < n {
            let f = qp.pow_int(2 * k as i64 + 1) * (1.0 - qp.pow_int((n - k) as i64))
                / (1.0 - q * qp.pow_int(k as i64));
            term *= -x * f;
        }
    }
    Advised::new(acc.sum(), n)
}

/// Orthonormal `s~_n(e^v; q) = (-1)^n sqrt(q^n (q;q)_n) S_n(e^v; q)`.
pub fn sw_orthonormal(n: usize, v: f64, qp: &QParam) -> f64 {
    let ln_q = qp.ln_q();
    let nf = n as f64;
    let base = 0.5 * (nf * ln_q + qp.ln_qq(n));
    let mut acc = NeumaierSum::new();
    for k in 0..=n {
        let kf = k as f64;
        let e = base + kf * kf * ln_q + kf * v - qp.ln_qq(k) - qp.ln_qq(n - k);
        acc.add(parity(n + k) * e.exp());
    }
    acc.sum()
}

/// `S_n(x_n; q) = (-1)^n u^n q^{n^2(1-t)} sum_k q^{k^2} (-q^{n(t-2)}/u)^k / ((q;q)_k (q;q)_{n-k})`,
/// from the defining sum after `k -> n - k`.
pub fn sw_eval_scaled(p: &SWScalingPoint, qp: &QParam) -> Result<ScaledEval> {
    validate_u(p.u)?;
    let n = p.n;
    let nf = n as f64;
    let ln_q = qp.ln_q();
    let lu = ln_u(p.u);
    let a = nf * (p.t - 2.0) * ln_q;
    let ln_w = a - lu.re;
    let ln_w_scale = a.abs() + lu.re.abs();
    let terms: Vec<LogTerm> = (0..=n)
        .map(|k| {
            let kf = k as f64;
            let den = qp.ln_qq(k) + qp.ln_qq(n - k);
            let sq = kf * kf * ln_q;
            LogTerm {
                log_mag: sq + kf * ln_w - den,
                phase: parity(k) * unit_power(p.u, -(k as i64)),
                log_err: gamma(4.0) * (den.abs() + sq.abs() + kf * ln_w_scale)
                    + gamma(2.0 * nf + 6.0),
            }
        })
        .collect();
    let (sum, rel_sum) = sum_log_terms(&terms);
    let monomial = LogMonomial {
        sign: parity(n),
        q_exp: nf * nf * (1.0 - p.t),
        u_exp: nf,
        qq_exp: 0.0,
    };
    let ln_qq = qp.ln_qq(n);
    let (_, mono_err) = monomial.ln(ln_q, lu, ln_qq);
    Ok(ScaledEval {
        monomial,
        sum,
        rel_error: (1.0 + rel_sum) * mono_err.exp() - 1.0,
        sum_rel_error: rel_sum,
        ln_q,
        ln_u: lu,
        ln_qq,
    })
}

/// Power of `q` inside the square root of the Stieltjes-Wigert bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SwPrefactor {
    /// `q^{-2n}`, the Jacobian of `x = q^{-2n} u`; the bracket tends to
    /// `A_q(1/u) / (q;q)_inf`.
    QPowMinus2N,
    /// `q^{-n}`; the bracket picks up an extra `q^{n/2}` and tends to zero.
    QPowMinusN,
}

/// The renormalized bracket
/// `sqrt(q^{-2n} w_SW(q^{-2n} u) / ((q;q)_n w_SW(u))) s~_n(q^{-2n} u)` at
/// `t = 2`, real `u > 0`. Equals `sum_k q^{k^2} (-1/u)^k / ((q;q)_k (q;q)_{n-k})`.
pub fn sw_orthonormal_scaled_bracket(
    p: &SWScalingPoint,
    qp: &QParam,
) -> Result<CertifiedValue<f64>> {
    sw_orthonormal_scaled_bracket_with(p, qp, SwPrefactor::QPowMinus2N)
}

pub fn sw_orthonormal_scaled_bracket_with(
    p: &SWScalingPoint,
    qp: &QParam,
    prefactor: SwPrefactor,
) -> Result<CertifiedValue<f64>> {
    if p.t != 2.0 {
        return Err(QError::DomainError(format!(
            "the bracket is defined at t = 2, got {}",
            p.t
        )));
    }
    if p.u.im != 0.0 {
        return Err(QError::DomainError(format!(
            "brackets need real u > 0, got {}",
            p.u
        )));
    }
    positive_real(p.u.re)?;
    let eval = sw_eval_scaled(p, qp)?;
    let nf = p.n as f64;
    let jac = match prefactor {
        SwPrefactor::QPowMinus2N => -nf,
        SwPrefactor::QPowMinusN => -nf / 2.0,
    };
    // weight ratio u^{-nt} q^{(n^2 t^2 + nt)/2} under the root, and
    // (-1)^n q^{n/2} (q;q)_n^{1/2} from s~_n against (q;q)_n^{-1/2}
    let pre = LogMonomial {
        sign: parity(p.n),
        q_exp: jac + (nf * nf * p.t * p.t + nf * p.t) / 4.0 + nf / 2.0,
        u_exp: -nf * p.t / 2.0,
        qq_exp: 0.0,
    };
    finish_bracket(pre.times(eval.monomial), &eval, p.n)
}

/// `-ln (q^m; q)_inf = -sum_{j>=m} ln(1 - q^j)` with an error bound.
fn ln_qpoch_tail(m: usize, qp: &QParam) -> (f64, f64) {
    let mut acc = NeumaierSum::new();
    let mut j = m;
    loop {
        let v = -(-qp.pow_int(j as i64)).ln_1p();
        acc.add(v);
        // the remaining terms sum to less than v q / (1 - q)^2
        let rest = v * qp.q() / ((1.0 - qp.q()) * (1.0 - qp.q()));
        if rest <= EPS * EPS * acc.sum() || v == 0.0 {
            let s = acc.sum();
            return (s, rest + gamma((j - m) as f64 + 4.0) * s);
        }
        j += 1;
    }
}

/// `|S_n(x_n; q)| <= |u|^n A_q(-q^{n(t-2)} / |u|) / ((q;q)_inf q^{n^2(t-1)})`.
pub fn sw_bound_check(p: &SWScalingPoint, qp: &QParam) -> Result<BoundReport> {
    let eval = sw_eval_scaled(p, qp)?;
    let nf = p.n as f64;
    let ln_q = qp.ln_q();
    let lu = ln_u(p.u).re;
    let a = nf * (p.t - 2.0) * ln_q;
    let x = (a - lu).exp();
    let x_err = gamma(3.0) * (a.abs() + lu.abs());
    if !x.is_finite() {
        return Err(QError::DomainError(format!(
            "bound argument overflows at n = {}, t = {}, u = {}",
            p.n, p.t, p.u
        )));
    }
    let aq = aq_eval_scaled(Complex64::new(-x, 0.0), qp, 1e-15)?;
    let qq_inf = ln_qpoch_infinite(qp.q(), qp, 1e-16)?;
    // both sides carry the same monomial, so only the sums are compared
    let (mono, _) = eval.monomial.ln(eval.ln_q, eval.ln_u, eval.ln_qq);
    let rel_rhs =
        (x_err * aq.terms_used as f64 + qq_inf.tail_bound).exp() * (1.0 + aq.rel_error) - 1.0;
    let report = BoundReport::from_logs_shared(
        mono.re,
        eval.sum.log_mag(),
        eval.sum_rel_error,
        aq.value.log_mag() - qq_inf.value,
        rel_rhs,
    );
    if report.verdict != Verdict::Inconclusive {
        return Ok(report);
    }
    // the k = 0 coefficients are 1/(q;q)_n against 1/(q;q)_inf
    let ratio0 = ln_qpoch_tail(nf as usize + 1, qp);
    let phase = |k: usize| unit_power(p.u, -(k as i64));
    Ok(match refined_log_gap(p.n, a - lu, phase, ratio0, qp) {
        Some((gap, err)) => report.refine(gap, err),
        None => report,
    })
}
