use num_complex::Complex64;

use super::{
    ln_u, parity, positive_real, refined_log_gap, sum_log_terms, unit_power, validate_t,
    validate_u, Advised, LogMonomial, LogTerm, ScaledEval,
};
use crate::error::{QError, Result};
use crate::qcore::sum::NeumaierSum;
use crate::qcore::{gamma, ln_qbinomial, qbinomial_unchecked, CertifiedValue, QParam};
use crate::ramanujan::{aq_eval_scaled, BoundReport, Verdict};

/// The point `sinh xi_n = (q^{-nt} u - q^{nt} / u) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IMScalingPoint {
    pub n: usize,
    pub t: f64,
    pub u: Complex64,
    pub sinh_xi_n: Complex64,
}

impl IMScalingPoint {
    pub fn new(n: usize, t: f64, u: Complex64, qp: &QParam) -> Result<Self> {
        validate_t(t)?;
        validate_u(u)?;
        Ok(Self {
            n,
            t,
            u,
            sinh_xi_n: Self::sinh_xi(n, t, u, qp),
        })
    }

    /// `(q^{-nt} u - q^{nt} / u) / 2`.
    pub fn sinh_xi(n: usize, t: f64, u: Complex64, qp: &QParam) -> Complex64 {
        let e = n as f64 * t;
        (qp.pow(-e) * u - qp.pow(e) / u) / 2.0
    }

    /// `xi_n = ln u - n t ln q` for real `u > 0`, so that `e^{xi_n} = q^{-nt} u`.
    pub fn xi_n(&self, qp: &QParam) -> Option<f64> {
        (self.u.im == 0.0 && self.u.re > 0.0)
            .then(|| self.u.re.ln() - self.n as f64 * self.t * qp.ln_q())
    }
}

/// `h_n(sinh xi | q) = sum_k [n,k]_q q^{k(k-n)} (-1)^k e^{(n-2k) xi}`.
pub fn im_eval_direct(n: usize, xi: f64, qp: &QParam) -> Advised<f64> {
    let ln_q = qp.ln_q();
    let mut acc = NeumaierSum::new();
    for k in 0..=n {
        let e = (k as f64) * (k as f64 - n as f64) * ln_q + (n as f64 - 2.0 * k as f64) * xi;
        acc.add(parity(k) * qbinomial_unchecked(n, k, qp) * e.exp());
    }
    Advised::new(acc.sum(), n)
}

/// Orthonormal `h~_n(sinh xi | q) = q^{n(n+1)/4} h_n(sinh xi | q) / sqrt((q;q)_n)`,
/// with the normalization folded into each term.
pub fn im_orthonormal(n: usize, xi: f64, qp: &QParam) -> f64 {
    let ln_q = qp.ln_q();
    let nf = n as f64;
    let base = nf * (nf + 1.0) / 4.0;
    let half_ln_qq = 0.5 * qp.ln_qq(n);
    let mut acc = NeumaierSum::new();
    for k in 0..=n {
        let kf = k as f64;
        let e = (base + kf * (kf - nf)) * ln_q + (nf - 2.0 * kf) * xi - half_ln_qq;
        acc.add(parity(k) * qbinomial_unchecked(n, k, qp) * e.exp());
    }
    acc.sum()
}

/// `h_n(sinh xi_n | q) = u^n q^{-n^2 t} sum_k [n,k]_q q^{k^2} (-q^{n(2t-1)} / u^2)^k`.
pub fn im_eval_scaled(p: &IMScalingPoint, qp: &QParam) -> Result<ScaledEval> {
    validate_u(p.u)?;
    let n = p.n;
    let nf = n as f64;
    let ln_q = qp.ln_q();
    let lu = ln_u(p.u);
    let a = nf * (2.0 * p.t - 1.0) * ln_q;
    let ln_w = a - 2.0 * lu.re;
    let ln_w_scale = a.abs() + 2.0 * lu.re.abs();
    let bin_err = gamma(2.0 * nf + 6.0);
    let terms: Vec<LogTerm> = (0..=n)
        .map(|k| {
            let kf = k as f64;
            let lb = ln_qbinomial(n, k, qp);
            let sq = kf * kf * ln_q;
            LogTerm {
                log_mag: lb + sq + kf * ln_w,
                phase: parity(k) * unit_power(p.u, -2 * k as i64),
                log_err: gamma(4.0) * (lb.abs() + sq.abs() + kf * ln_w_scale) + bin_err,
            }
        })
        .collect();
    let (sum, rel_sum) = sum_log_terms(&terms);
    let monomial = LogMonomial {
        sign: 1.0,
        q_exp: -nf * nf * p.t,
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

/// The renormalized bracket
/// `sqrt((q;q)_n w_IM(sinh xi_n) / (q^{n/2} w_IM(sinh(ln u)))) h~_n(sinh xi_n)`
/// at `t = 1/2`, real `u > 0`.
///
/// The weight ratio is `u^{-4nt} q^{2 n^2 t^2}`; combined with the
/// orthonormalization and the scaled evaluation every power of `q` and `u`
/// cancels, leaving `sum_k [n,k]_q q^{k^2} (-u^{-2})^k`.
pub fn im_orthonormal_scaled_bracket(
    p: &IMScalingPoint,
    qp: &QParam,
) -> Result<CertifiedValue<f64>> {
    if p.t != 0.5 {
        return Err(QError::DomainError(format!(
            "the bracket is defined at t = 1/2, got {}",
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
    let eval = im_eval_scaled(p, qp)?;
    let nf = p.n as f64;
    let prefactor = LogMonomial {
        sign: 1.0,
        q_exp: nf * nf * p.t * p.t - nf / 4.0 + nf * (nf + 1.0) / 4.0,
        u_exp: -2.0 * nf * p.t,
        // (q;q)_n^{1/2} from the weight ratio meets (q;q)_n^{-1/2} from h~_n
        qq_exp: 0.0,
    };
    finish_bracket(prefactor.times(eval.monomial), &eval, p.n)
}

pub(super) fn finish_bracket(
    total: LogMonomial,
    eval: &ScaledEval,
    n: usize,
) -> Result<CertifiedValue<f64>> {
    let (ln, err) = total.ln(eval.ln_q, eval.ln_u, eval.ln_qq);
    let s = eval.sum.to_value();
    let value = total.sign * ln.re.exp() * s.re;
    let rel_sum = eval.sum_rel_error;
    let bound = value.abs() * ((1.0 + rel_sum) * err.exp() - 1.0) + s.im.abs() * ln.re.exp();
    Ok(CertifiedValue::new(value, bound, n + 1))
}

/// `|h_n(sinh xi_n | q)| <= |u|^n q^{-n^2 t} A_q(-q^{n(2t-1)} / |u|^2)`.
pub fn im_bound_check(p: &IMScalingPoint, qp: &QParam) -> Result<BoundReport> {
    let eval = im_eval_scaled(p, qp)?;
    let nf = p.n as f64;
    let ln_q = qp.ln_q();
    let lu = ln_u(p.u).re;
    let ln_x = nf * (2.0 * p.t - 1.0) * ln_q - 2.0 * lu;
    let x_err = gamma(3.0) * ((nf * (2.0 * p.t - 1.0) * ln_q).abs() + 2.0 * lu.abs());
    let x = ln_x.exp();
    if !x.is_finite() {
        return Err(QError::DomainError(format!(
            "bound argument overflows at n = {}, t = {}, u = {}",
            p.n, p.t, p.u
        )));
    }
    let aq = aq_eval_scaled(Complex64::new(-x, 0.0), qp, 1e-15)?;
    // both sides carry the same monomial, so only the sums are compared
    let (mono, _) = eval.monomial.ln(eval.ln_q, eval.ln_u, eval.ln_qq);
    // A_q(-x) has all terms positive; its elasticity in x is at most the
    // number of terms summed
    let rel_rhs = (x_err * aq.terms_used as f64).exp() * (1.0 + aq.rel_error) - 1.0;
    let report = BoundReport::from_logs_shared(
        mono.re,
        eval.sum.log_mag(),
        eval.sum_rel_error,
        aq.value.log_mag(),
        rel_rhs,
    );
    if report.verdict != Verdict::Inconclusive {
        return Ok(report);
    }
    let phase = |k: usize| unit_power(p.u, -2 * k as i64);
    Ok(match refined_log_gap(p.n, ln_x, phase, (0.0, 0.0), qp) {
        Some((gap, err)) => report.refine(gap, err),
        None => report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthopoly::{im_weight, im_weight_sinh};
    use crate::ramanujan::{aq_eval, AqRequest, Verdict};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn direct_low_degrees() {
        let qp = QParam::new(0.5).unwrap();
        for xi in [-2.0, -0.3, 0.0, 0.7, 3.0] {
            assert_eq!(im_eval_direct(0, xi, &qp).value, 1.0);
            let h1 = im_eval_direct(1, xi, &qp).value;
            assert!((h1 - 2.0 * f64::sinh(xi)).abs() < 1e-14 * (1.0 + h1.abs()));
        }
        assert!((im_eval_direct(2, 0.0, &qp).value + 1.0).abs() < 1e-15);
        assert!(im_eval_direct(60, 0.1, &qp).advisory.is_none());
        assert!(im_eval_direct(61, 0.1, &qp).advisory.is_some());
    }

    #[test]
    fn scaling_point_fields() {
        let qp = QParam::new(0.5).unwrap();
        let p = IMScalingPoint::new(3, 0.5, c(2.0), &qp).unwrap();
        assert_eq!(p.sinh_xi_n, IMScalingPoint::sinh_xi(3, 0.5, c(2.0), &qp));
        let xi = p.xi_n(&qp).unwrap();
        assert!((xi.exp() - 0.5f64.powf(-1.5) * 2.0).abs() < 1e-13);
        assert!((xi.sinh() - p.sinh_xi_n.re).abs() < 1e-12);
        assert!(IMScalingPoint::new(3, 0.5, c(0.0), &qp).is_err());
        assert!(IMScalingPoint::new(3, 0.0, c(1.0), &qp).is_err());
    }

    #[test]
    fn scaled_matches_direct() {
        let qp = QParam::new(0.5).unwrap();
        let p = IMScalingPoint::new(6, 0.5, c(2.0), &qp).unwrap();
        let s = im_eval_scaled(&p, &qp).unwrap().value().to_value();
        let d = im_eval_direct(6, p.xi_n(&qp).unwrap(), &qp).value;
        assert!((s.re - d).abs() <= 1e-8 * d.abs());
        assert_eq!(s.im, 0.0);

        let p = IMScalingPoint::new(0, 0.7, c(3.0), &qp).unwrap();
        assert_eq!(im_eval_scaled(&p, &qp).unwrap().value().to_value(), c(1.0));
    }

    #[test]
    fn scaled_survives_overflow() {
        let qp = QParam::new(0.5).unwrap();
        let p = IMScalingPoint::new(40, 0.5, c(2.0), &qp).unwrap();
        let e = im_eval_scaled(&p, &qp).unwrap();
        let expected = -800.0 * qp.ln_q() + 40.0 * 2f64.ln() + 0.760_323_854_379_036f64.ln();
        assert!((e.log_abs() - expected).abs() < 1e-8);
    }

    #[test]
    fn brackets_approach_aq() {
        let qp = QParam::new(0.5).unwrap();
        let p = IMScalingPoint::new(0, 0.5, c(1.0), &qp).unwrap();
        assert_eq!(im_orthonormal_scaled_bracket(&p, &qp).unwrap().value, 1.0);
        let p = IMScalingPoint::new(60, 0.5, c(1.0), &qp).unwrap();
        let b = im_orthonormal_scaled_bracket(&p, &qp).unwrap();
        assert!((b.value - 0.160_763_788_932_088_7).abs() < 1e-12);
        let p = IMScalingPoint::new(20, 0.5, c(2.0), &qp).unwrap();
        let b = im_orthonormal_scaled_bracket(&p, &qp).unwrap();
        assert!((b.value - 0.760_323_854_379_036).abs() < 1e-5);
    }

    #[test]
    fn bracket_domain() {
        let qp = QParam::new(0.5).unwrap();
        let p = IMScalingPoint::new(4, 1.0, c(1.0), &qp).unwrap();
        assert!(im_orthonormal_scaled_bracket(&p, &qp).is_err());
        let p = IMScalingPoint::new(4, 0.5, c(-1.0), &qp).unwrap();
        assert!(im_orthonormal_scaled_bracket(&p, &qp).is_err());
        let p = IMScalingPoint::new(4, 0.5, Complex64::new(1.0, 1.0), &qp).unwrap();
        assert!(im_orthonormal_scaled_bracket(&p, &qp).is_err());
    }

    #[test]
    fn bracket_matches_weight_based_evaluation() {
        // assemble the bracket from the actual weights and the direct
        // polynomial at moderate degree
        let qp = QParam::new(0.5).unwrap();
        for &(n, u) in &[(3usize, 1.3), (6, 2.0), (9, 0.8)] {
            let p = IMScalingPoint::new(n, 0.5, c(u), &qp).unwrap();
            let xi = p.xi_n(&qp).unwrap();
            let ln_ratio =
                im_weight_sinh(xi, &qp).log_value - im_weight_sinh(u.ln(), &qp).log_value;
            let pre = 0.5 * (qp.ln_qq(n) + ln_ratio - 0.5 * n as f64 * qp.ln_q());
            let direct = pre.exp() * im_orthonormal(n, xi, &qp);
            let b = im_orthonormal_scaled_bracket(&p, &qp).unwrap().value;
            assert!((direct - b).abs() < 1e-9 * (1.0 + b.abs()), "n={n} u={u}");
        }
    }

    #[test]
    fn bound_examples() {
        let qp = QParam::new(0.5).unwrap();
        let p = IMScalingPoint::new(0, 0.5, c(1.7), &qp).unwrap();
        let r = im_bound_check(&p, &qp).unwrap();
        assert_eq!(r.lhs, 1.0);
        assert!(r.rhs >= 1.0 && r.verdict == Verdict::Holds);
        let p = IMScalingPoint::new(10, 0.5, c(2.0), &qp).unwrap();
        assert_eq!(im_bound_check(&p, &qp).unwrap().verdict, Verdict::Holds);
        let qp = QParam::new(0.3).unwrap();
        let p = IMScalingPoint::new(10, 2.0, Complex64::new(1.0, 1.0), &qp).unwrap();
        assert_eq!(im_bound_check(&p, &qp).unwrap().verdict, Verdict::Holds);
    }

    #[test]
    fn weight_scaling_identity() {
        // log w(sinh xi_n) - log w(sinh(ln u)) = -4nt ln u + 2 n^2 t^2 ln q
        for q in [0.2, 0.5, 0.8] {
            let qp = QParam::new(q).unwrap();
            for &t in &[0.5, 1.0, 2.0] {
                for n in 0..=30usize {
                    for &u in &[0.3f64, 1.0, 1.7, 4.0] {
                        let p = IMScalingPoint::new(n, t, c(u), &qp).unwrap();
                        let xi = p.xi_n(&qp).unwrap();
                        let lhs = im_weight_sinh(xi, &qp).log_value
                            - im_weight_sinh(u.ln(), &qp).log_value;
                        let nf = n as f64;
                        let rhs = -4.0 * nf * t * u.ln() + 2.0 * nf * nf * t * t * qp.ln_q();
                        assert!(
                            (lhs - rhs).abs() < 1e-9 * (1.0 + rhs.abs()),
                            "{q} {t} {n} {u}"
                        );
                    }
                }
            }
        }
        // the asinh route agrees where sinh(ln u) is representable
        let qp = QParam::new(0.5).unwrap();
        let u: f64 = 1.7;
        let a = im_weight((u - 1.0 / u) / 2.0, &qp).log_value;
        let b = im_weight_sinh(u.ln(), &qp).log_value;
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn parity_symmetry() {
        let qp = QParam::new(0.4).unwrap();
        for n in 0..=20usize {
            for &xi in &[0.1, 0.9, 2.5] {
                let a = im_eval_direct(n, xi, &qp).value;
                let b = im_eval_direct(n, -xi, &qp).value;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!(
                    (a - sign * b).abs() <= 1e-12 * a.abs().max(1.0),
                    "n={n} xi={xi}"
                );
            }
        }
    }

    #[test]
    fn bracket_limit_with_aq_oracle() {
        let qp = QParam::new(0.5).unwrap();
        let target = aq_eval(&AqRequest::new(c(0.25), &qp, 1e-16).unwrap())
            .value
            .re;
        let p = IMScalingPoint::new(80, 0.5, c(2.0), &qp).unwrap();
        let b = im_orthonormal_scaled_bracket(&p, &qp).unwrap();
        assert!((b.value - target).abs() < 1e-12);
        assert!(b.tail_bound < 1e-12);
    }
}
