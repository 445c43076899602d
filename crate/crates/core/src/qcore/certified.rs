use serde::{Deserialize, Serialize};

/// A computed value together with a bound on `|true - value|` covering
/// truncation and accumulated rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifiedValue<T> {
    pub value: T,
    pub tail_bound: f64,
    pub terms_used: usize,
}

impl<T> CertifiedValue<T> {
    pub(crate) fn new(value: T, tail_bound: f64, terms_used: usize) -> Self {
        debug_assert!(tail_bound >= 0.0, "negative tail bound {tail_bound}");
        Self {
            value,
            tail_bound,
            terms_used: terms_used.max(1),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> CertifiedValue<U> {
        CertifiedValue {
            value: f(self.value),
            tail_bound: self.tail_bound,
            terms_used: self.terms_used,
        }
    }
}

/// Unit roundoff for `f64`.
pub(crate) const EPS: f64 = f64::EPSILON / 2.0;

/// Standard `gamma_n = n u / (1 - n u)` rounding-error factor.
pub(crate) fn gamma(n: f64) -> f64 {
    let nu = n * EPS;
    if nu >= 0.5 {
        f64::INFINITY
    } else {
        nu / (1.0 - nu)
    }
}
