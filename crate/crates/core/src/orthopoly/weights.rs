use crate::error::{QError, Result};
use crate::qcore::QParam;

/// A weight function value, kept alongside its logarithm because the
/// weights are Gaussian in `asinh x` or `ln x` and underflow quickly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightValue {
    pub value: f64,
    pub log_value: f64,
}

impl WeightValue {
    fn from_log(log_value: f64) -> Self {
        Self {
            value: log_value.exp(),
            log_value,
        }
    }
}

/// `ln sqrt(-2 q^{1/4} / (pi ln q))`
fn im_ln_prefactor(qp: &QParam) -> f64 {
    let ln_q = qp.ln_q();
    0.5 * (std::f64::consts::LN_2 + 0.25 * ln_q - std::f64::consts::PI.ln() - (-ln_q).ln())
}

/// `ln sqrt(-1 / (2 pi ln q))`
fn sw_ln_prefactor(qp: &QParam) -> f64 {
    -0.5 * ((2.0 * std::f64::consts::PI).ln() + (-qp.ln_q()).ln())
}

/// Ismail-Masson weight
/// `sqrt(-2 q^{1/4} / (pi ln q)) exp((2 / ln q) asinh^2 x)` on the real line.
pub fn im_weight(x: f64, qp: &QParam) -> WeightValue {
    im_weight_sinh(x.asinh(), qp)
}

/// Ismail-Masson weight at `x = sinh xi`, without forming `x`.
pub fn im_weight_sinh(xi: f64, qp: &QParam) -> WeightValue {
    WeightValue::from_log(im_ln_prefactor(qp) + 2.0 * xi * xi / qp.ln_q())
}

/// Stieltjes-Wigert weight
/// `sqrt(-1 / (2 pi ln q)) exp(ln^2(x / sqrt q) / (2 ln q))` on `(0, inf)`.
pub fn sw_weight(x: f64, qp: &QParam) -> Result<WeightValue> {
    if !(x > 0.0) {
        return Err(QError::DomainError(format!(
            "the Stieltjes-Wigert weight lives on x > 0, got {x}"
        )));
    }
    Ok(sw_weight_log(x.ln(), qp))
}

/// Stieltjes-Wigert weight at `x = e^v`.
pub fn sw_weight_log(v: f64, qp: &QParam) -> WeightValue {
    let ln_q = qp.ln_q();
    let d = v - 0.5 * ln_q;
    WeightValue::from_log(sw_ln_prefactor(qp) + d * d / (2.0 * ln_q))
}
