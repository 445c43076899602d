//! Ismail-Masson and Stieltjes-Wigert polynomials.
//!
//! Each family has a direct evaluator (the defining finite sum, useful up to
//! moderate degree), a scaled evaluator at `x ~ q^{-nt} u` that keeps the
//! `q^{Theta(n^2)}` prefactor symbolic, and the renormalized brackets whose
//! large-degree limits are `A_q` values.
//!
//! Prefactors are carried as [`LogMonomial`]s, i.e. exponents of `q`, `u` and
//! `(q;q)_n`, so that when a bracket multiplies several of them the
//! exponents cancel exactly before anything is exponentiated.

mod ismail_masson;
mod stieltjes_wigert;
mod weights;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use ismail_masson::{
    im_bound_check, im_eval_direct, im_eval_scaled, im_orthonormal, im_orthonormal_scaled_bracket,
    IMScalingPoint,
};
pub use stieltjes_wigert::{
    sw_bound_check, sw_eval_direct, sw_eval_scaled, sw_orthonormal, sw_orthonormal_scaled_bracket,
    sw_orthonormal_scaled_bracket_with, SWScalingPoint, SwPrefactor,
};
pub use weights::{im_weight, im_weight_sinh, sw_weight, sw_weight_log, WeightValue};

use crate::qcore::sum::{ComplexSum, NeumaierSum};
use crate::qcore::{gamma, LogScaled, QParam, EPS};

/// Degree above which the direct evaluators flag possible precision loss.
pub const DIRECT_DEGREE_LIMIT: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Advisory {
    /// The defining sum was evaluated beyond [`DIRECT_DEGREE_LIMIT`]; use the
    /// scaled evaluator instead.
    PrecisionLoss { degree: usize },
}

/// A value together with an optional advisory about its reliability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Advised<T> {
    pub value: T,
    pub advisory: Option<Advisory>,
}

impl<T> Advised<T> {
    fn new(value: T, degree: usize) -> Self {
        let advisory = (degree > DIRECT_DEGREE_LIMIT).then_some(Advisory::PrecisionLoss { degree });
        Self { value, advisory }
    }
}

/// `sign * q^{q_exp} * u^{u_exp} * (q;q)_n^{qq_exp}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogMonomial {
    pub sign: f64,
    pub q_exp: f64,
    pub u_exp: f64,
    pub qq_exp: f64,
}

impl LogMonomial {
    pub const ONE: LogMonomial = LogMonomial {
        sign: 1.0,
        q_exp: 0.0,
        u_exp: 0.0,
        qq_exp: 0.0,
    };

    /// Product of two monomials.
    pub fn times(self, other: LogMonomial) -> LogMonomial {
        LogMonomial {
            sign: self.sign * other.sign,
            q_exp: self.q_exp + other.q_exp,
            u_exp: self.u_exp + other.u_exp,
            qq_exp: self.qq_exp + other.qq_exp,
        }
    }

    /// Complex logarithm (principal branch in `u`) and an absolute error
    /// bound on its real part.
    pub fn ln(&self, ln_q: f64, ln_u: Complex64, ln_qq: f64) -> (Complex64, f64) {
        let a = self.q_exp * ln_q;
        let b = self.u_exp * ln_u;
        let c = self.qq_exp * ln_qq;
        let mut v = b + a + c;
        if self.sign < 0.0 {
            v.im += std::f64::consts::PI;
        }
        let err = gamma(3.0) * (a.abs() + b.re.abs() + c.abs());
        (v, err)
    }
}

/// A scaled polynomial value `monomial * sum`, with `sum` an O(1) quantity
/// kept in log-scaled form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledEval {
    pub monomial: LogMonomial,
    pub sum: LogScaled<Complex64>,
    /// Relative error bound of the whole value.
    pub rel_error: f64,
    /// Relative error bound of `sum` alone.
    pub sum_rel_error: f64,
    ln_q: f64,
    ln_u: Complex64,
    ln_qq: f64,
}

impl ScaledEval {
    fn monomial_ln(&self) -> (Complex64, f64) {
        self.monomial.ln(self.ln_q, self.ln_u, self.ln_qq)
    }

    pub fn value(&self) -> LogScaled<Complex64> {
        let (m, _) = self.monomial_ln();
        if self.sum.is_zero() {
            return LogScaled::zero();
        }
        let phase = self.sum.sign() * Complex64::from_polar(1.0, m.im);
        LogScaled::from_parts(phase, self.sum.log_mag() + m.re)
    }

    pub fn log_abs(&self) -> f64 {
        self.monomial_ln().0.re + self.sum.log_mag()
    }
}

struct LogTerm {
    log_mag: f64,
    phase: Complex64,
    /// Absolute error bound on `log_mag`.
    log_err: f64,
}

/// Sum terms given as `phase * exp(log_mag)`, returning the log-scaled total
/// and a relative error bound.
fn sum_log_terms(terms: &[LogTerm]) -> (LogScaled<Complex64>, f64) {
    let m = terms
        .iter()
        .map(|t| t.log_mag)
        .fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return (LogScaled::zero(), 0.0);
    }
    let mut acc = ComplexSum::new();
    let mut abs_sum = 0.0;
    let mut weighted = 0.0;
    for t in terms {
        let mag = (t.log_mag - m).exp();
        acc.add(t.phase * mag);
        abs_sum += mag;
        weighted += mag * ((t.log_err + gamma(2.0 + (t.log_mag - m).abs())).exp_m1() + 4.0 * EPS);
    }
    let s = acc.sum();
    let n = terms.len() as f64;
    let err = weighted + 2.0 * EPS * s.norm() + 2.0 * n * EPS * EPS * abs_sum;
    let rel = if err == 0.0 {
        0.0
    } else if s.norm() == 0.0 {
        f64::INFINITY
    } else {
        err / s.norm()
    };
    (LogScaled::from_scaled(s, m), rel)
}

/// `(u/|u|)^k` for integer `k`, exact for real `u`.
fn unit_power(u: Complex64, k: i64) -> Complex64 {
    if u.im == 0.0 {
        let s = if u.re < 0.0 && k % 2 != 0 { -1.0 } else { 1.0 };
        Complex64::new(s, 0.0)
    } else {
        Complex64::from_polar(1.0, k as f64 * u.arg())
    }
}

fn parity(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn validate_u(u: Complex64) -> crate::Result<()> {
    if u == Complex64::new(0.0, 0.0) || !(u.re.is_finite() && u.im.is_finite()) {
        return Err(crate::QError::DomainError(format!(
            "scaling parameter u must be finite and nonzero, got {u}"
        )));
    }
    Ok(())
}

fn validate_t(t: f64) -> crate::Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(crate::QError::DomainError(format!(
            "scaling exponent t must be positive, got {t}"
        )));
    }
    Ok(())
}

fn ln_u(u: Complex64) -> Complex64 {
    Complex64::new(u.norm().ln(), u.arg())
}

fn positive_real(u: f64) -> crate::Result<()> {
    if !(u > 0.0 && u.is_finite()) {
        return Err(crate::QError::DomainError(format!(
            "brackets need real u > 0, got {u}"
        )));
    }
    Ok(())
}

/// `sum_{j=lo}^{hi} ln(1 - q^j)` and an absolute error bound.
fn ln_qpoch_range(lo: usize, hi: usize, qp: &QParam) -> (f64, f64) {
    let mut acc = NeumaierSum::new();
    let mut abs = 0.0;
    for j in lo..=hi {
        let v = (-qp.pow_int(j as i64)).ln_1p();
        acc.add(v);
        abs += v.abs();
    }
    (
        acc.sum(),
        gamma((hi + 1).saturating_sub(lo) as f64 + 4.0) * abs,
    )
}

/// Tie-breaker for `|sum_{k<=n} [n,k] q^{k^2} (-w)^k| <= c * A_q(-|w|)` with
/// `ln c = ratio0 >= 0`, used when both sides agree to working precision.
///
/// The `k = 0` terms are factored out so that
/// `D = ratio0 + ln(1 + B) - ln|1 + A|` is formed without cancellation,
/// with `A`, `B` the remaining sums. `w` is taken as exact (`ln|w|` and
/// `phase(k) = (w/|w|)^k`); the inequality holds at every `w`, so this
/// audits the point actually evaluated. Returns `(D, error bound)`, or
/// `None` for `|w| > 1` where no ties arise.
fn refined_log_gap(
    n: usize,
    ln_w: f64,
    phase: impl Fn(usize) -> Complex64,
    ratio0: (f64, f64),
    qp: &QParam,
) -> Option<(f64, f64)> {
    if !(ln_w <= 0.0) {
        return None;
    }
    let ln_q = qp.ln_q();
    let mut a = ComplexSum::new();
    let mut a_abs = 0.0;
    let mut a_err = 0.0;
    let mut b = NeumaierSum::new();
    let mut b_abs = 0.0;
    let mut b_err = 0.0;
    let mut ln_qq_k = (0.0, 0.0);
    let mut k = 1usize;
    loop {
        let kf = k as f64;
        let v = (-qp.pow_int(k as i64)).ln_1p();
        ln_qq_k = (ln_qq_k.0 + v, ln_qq_k.1 + v.abs());
        let base = kf * kf * ln_q + kf * ln_w - ln_qq_k.0;
        let base_err = gamma(kf + 6.0) * (kf * kf * ln_q.abs() + kf * ln_w.abs() + ln_qq_k.1);
        let mag_b = base.exp();
        b.add(mag_b);
        b_abs += mag_b;
        b_err += mag_b * ((base_err).exp_m1() + 2.0 * EPS);
        if k <= n {
            let (ln_tail, tail_err) = ln_qpoch_range(n - k + 1, n, qp);
            let mag_a = (base + ln_tail).exp();
            let sign = parity(k);
            a.add(sign * mag_a * phase(k));
            a_abs += mag_a;
            a_err += mag_a * ((base_err + tail_err).exp_m1() + (kf + 6.0) * EPS);
        }
        // beyond the peak the B-ratio q^{2k+1}|w|/(1-q^{k+1}) only shrinks
        let ratio = (2.0 * kf + 1.0) * ln_q + ln_w - (-qp.pow_int(k as i64 + 1)).ln_1p();
        if k > n && ratio < -0.7 && mag_b <= EPS * EPS * b_abs {
            b_err += 2.0 * mag_b;
            break;
        }
        k += 1;
        if k > 100_000 {
            return None;
        }
    }
    let big_a = a.sum();
    let big_b = b.sum();
    let nk = k as f64;
    let a_err = a_err + gamma(nk + 2.0) * a_abs;
    let b_err = b_err + gamma(nk + 2.0) * b_abs;
    let one_plus_a = (Complex64::new(1.0, 0.0) + big_a).norm();
    if a_err >= 0.5 * one_plus_a {
        return None;
    }
    let ln_a = 0.5 * (2.0 * big_a.re + big_a.norm_sqr()).ln_1p();
    let ln_b = big_b.ln_1p();
    let d = ratio0.0 + ln_b - ln_a;
    let err = ratio0.1
        + b_err / (1.0 + big_b)
        + 2.0 * a_err / one_plus_a
        + 4.0 * EPS * (ratio0.0.abs() + ln_b.abs() + ln_a.abs());
    Some((d, err))
}
