//! q-Pochhammer symbols and Gaussian binomial coefficients.
//!
//! Convention: `(a;q)_n = prod_{k=0}^{n-1} (1 - a q^k)`, so `(a;q)_0 = 1` and
//! `(a;q)_1 = 1 - a`.

use num_complex::Complex64;

use super::certified::{gamma, CertifiedValue};
use super::param::QParam;
use crate::error::{check_tol, QError, Result};

/// `(a;q)_n` as a plain product of `n` factors.
pub fn qpoch_finite(a: Complex64, qp: &QParam, n: usize) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    let mut aqk = a;
    for _ in 0..n {
        prod *= 1.0 - aqk;
        aqk *= qp.q();
    }
    prod
}

/// `(a;q)_inf` truncated once the dropped factors change the product by a
/// relative amount of at most `tol`.
///
/// The stopping rule uses `|prod_{k>=K}(1 - a q^k) - 1| <= exp(|a| q^K / (1-q)) - 1`.
/// The reported `tail_bound` adds a running rounding-error bound for the
/// partial product.
pub fn qpoch_infinite(a: Complex64, qp: &QParam, tol: f64) -> Result<CertifiedValue<Complex64>> {
    check_tol(tol)?;
    let q = qp.q();
    let abs_a = a.norm();
    if !(abs_a < 1.0 / q) {
        return Err(QError::NonConvergent(format!(
            "|a| = {abs_a} must be below 1/q = {}",
            1.0 / q
        )));
    }
    let stop = tol.ln_1p();
    let mut prod = Complex64::new(1.0, 0.0);
    let mut aqk = a;
    // relative rounding error of `prod`, in units of EPS
    let mut rel_units = 0.0;
    let mut k = 0usize;
    loop {
        let remaining = aqk.norm() / (1.0 - q);
        if remaining <= stop {
            break;
        }
        let factor = 1.0 - aqk;
        let fmag = factor.norm();
        if fmag == 0.0 {
            return Ok(CertifiedValue::new(Complex64::new(0.0, 0.0), 0.0, k + 1));
        }
        // a q^k carries ~(k+2) roundings; forming 1 - a q^k and the complex
        // product add a few more
        rel_units += aqk.norm() * (k as f64 + 3.0) / fmag + 4.0;
        prod *= factor;
        aqk *= q;
        k += 1;
    }
    let truncation = (aqk.norm() / (1.0 - q)).exp_m1();
    let pmag = prod.norm();
    let rounding = pmag * gamma(rel_units) * 1.01;
    let tail_bound = pmag * truncation * (1.0 + gamma(rel_units)) + rounding;
    Ok(CertifiedValue::new(prod, tail_bound, k))
}

/// `ln (a;q)_inf` for real `|a| < 1`, usable when the product itself
/// underflows. The bound is on the absolute error of the logarithm.
pub fn ln_qpoch_infinite(a: f64, qp: &QParam, tol: f64) -> Result<CertifiedValue<f64>> {
    check_tol(tol)?;
    if !(a.abs() < 1.0) {
        return Err(QError::NonConvergent(format!(
            "log form needs |a| < 1, got {a}"
        )));
    }
    let q = qp.q();
    let mut acc = super::sum::NeumaierSum::new();
    let mut aqk = a;
    let mut abs_sum = 0.0;
    let mut k = 0usize;
    loop {
        // sum_{j>=k} |ln(1 - a q^j)| <= |a| q^k / ((1 - q)(1 - |a| q^k))
        let tail = aqk.abs() / ((1.0 - q) * (1.0 - aqk.abs()));
        if tail <= tol {
            let rounding = gamma(2.0 * k as f64 + 4.0) * abs_sum;
            return Ok(CertifiedValue::new(acc.sum(), tail + rounding, k));
        }
        let term = (-aqk).ln_1p();
        abs_sum += term.abs() * (k as f64 + 2.0);
        acc.add(term);
        aqk *= q;
        k += 1;
    }
}

/// Gaussian binomial `[n, k]_q = (q;q)_n / ((q;q)_k (q;q)_{n-k})`.
pub fn qbinomial(n: usize, k: i64, qp: &QParam) -> Result<f64> {
    if k < 0 || k as u64 > n as u64 {
        return Err(QError::OutOfRange(format!(
            "q-binomial needs 0 <= k <= n, got n = {n}, k = {k}"
        )));
    }
    let k = k as usize;
    Ok(qbinomial_unchecked(n, k, qp))
}

pub(crate) fn qbinomial_unchecked(n: usize, k: usize, qp: &QParam) -> f64 {
    let num = qp.qq(n);
    // the denominator is a commutative product, so [n,k] == [n,n-k] bitwise
    let den = qp.qq(k) * qp.qq(n - k);
    if num > 1e-280 && den > 1e-280 {
        num / den
    } else {
        (qp.ln_qq(n) - (qp.ln_qq(k) + qp.ln_qq(n - k))).exp()
    }
}

/// `ln [n, k]_q`.
pub(crate) fn ln_qbinomial(n: usize, k: usize, qp: &QParam) -> f64 {
    let v = qbinomial_unchecked(n, k, qp);
    if v > 0.0 && v.is_finite() {
        v.ln()
    } else {
        qp.ln_qq(n) - (qp.ln_qq(k) + qp.ln_qq(n - k))
    }
}
