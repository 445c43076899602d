use crate::error::{QError, Result};

/// Default number of cached `(q;q)_k` entries beyond `k = 0`.
pub const DEFAULT_CACHE_SIZE: usize = 512;

/// A validated base `q` in `(0, 1)` with a table of `(q;q)_k`.
///
/// The table stores both the running product and its natural log so that
/// callers can stay in log space when `q` is close to 1 and the products
/// underflow.
#[derive(Debug, Clone, PartialEq)]
pub struct QParam {
    q: f64,
    ln_q: f64,
    pochhammer_cache: Vec<f64>,
    ln_pochhammer_cache: Vec<f64>,
}

impl QParam {
    pub fn new(q: f64) -> Result<Self> {
        Self::with_cache_size(q, DEFAULT_CACHE_SIZE)
    }

    pub fn with_cache_size(q: f64, k_max: usize) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QError::InvalidBase(q));
        }
        let ln_q = q.ln();
        let mut pochhammer_cache = Vec::with_capacity(k_max + 1);
        let mut ln_pochhammer_cache = Vec::with_capacity(k_max + 1);
        pochhammer_cache.push(1.0);
        ln_pochhammer_cache.push(0.0);
        let mut prod = 1.0;
        let mut ln_prod = 0.0;
        for k in 1..=k_max {
            let qk = q.powi(k as i32);
            prod *= 1.0 - qk;
            ln_prod += (-qk).ln_1p();
            pochhammer_cache.push(prod);
            ln_pochhammer_cache.push(ln_prod);
        }
        Ok(Self {
            q,
            ln_q,
            pochhammer_cache,
            ln_pochhammer_cache,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn ln_q(&self) -> f64 {
        self.ln_q
    }

    /// Largest `k` held in the cache.
    pub fn cache_max(&self) -> usize {
        self.pochhammer_cache.len() - 1
    }

    pub fn pochhammer_cache(&self) -> &[f64] {
        &self.pochhammer_cache
    }

    /// `(q;q)_k`, from the cache when possible.
    pub fn qq(&self, k: usize) -> f64 {
        if let Some(&v) = self.pochhammer_cache.get(k) {
            return v;
        }
        let mut prod = self.pochhammer_cache[self.cache_max()];
        for j in self.cache_max() + 1..=k {
            prod *= 1.0 - self.pow_int(j as i64);
        }
        prod
    }

    /// `ln (q;q)_k`, finite even when `(q;q)_k` underflows.
    pub fn ln_qq(&self, k: usize) -> f64 {
        if let Some(&v) = self.ln_pochhammer_cache.get(k) {
            return v;
        }
        let mut acc = self.ln_pochhammer_cache[self.cache_max()];
        for j in self.cache_max() + 1..=k {
            acc += (-self.pow_int(j as i64)).ln_1p();
        }
        acc
    }

    /// `q^e` for integer `e`.
    pub fn pow_int(&self, e: i64) -> f64 {
        if let Ok(e32) = i32::try_from(e) {
            self.q.powi(e32)
        } else {
            (e as f64 * self.ln_q).exp()
        }
    }

    /// `q^x` for real `x`.
    pub fn pow(&self, x: f64) -> f64 {
        (x * self.ln_q).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bases_outside_unit_interval() {
        for q in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(QParam::new(q), Err(QError::InvalidBase(_))));
        }
    }

    #[test]
    fn cache_is_the_running_product() {
        let qp = QParam::new(0.5).unwrap();
        let c = qp.pochhammer_cache();
        assert_eq!(c.len(), DEFAULT_CACHE_SIZE + 1);
        assert_eq!(c[0], 1.0);
        assert_eq!(c[1], 0.5);
        assert_eq!(c[2], 0.375);
        for k in 1..c.len() {
            assert_eq!(c[k], c[k - 1] * (1.0 - 0.5f64.powi(k as i32)));
            assert!(c[k] <= c[k - 1] && c[k] > 0.0);
        }
    }

    #[test]
    fn cache_strictly_decreases_while_factors_differ_from_one() {
        for q in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let qp = QParam::new(q).unwrap();
            let c = qp.pochhammer_cache();
            for k in 1..c.len() {
                if 1.0 - q.powi(k as i32) < 1.0 {
                    assert!(c[k] < c[k - 1], "q={q} k={k}");
                }
                assert!(c[k] <= 1.0 && c[k] > 0.0);
            }
        }
    }

    #[test]
    fn log_cache_survives_underflow() {
        let qp = QParam::new(0.999).unwrap();
        assert!(qp.ln_qq(512).is_finite());
        assert!(qp.ln_qq(512) < qp.ln_qq(511));
        let direct: f64 = (1..=40).map(|j| (1.0 - 0.999f64.powi(j)).ln()).sum();
        assert!((qp.ln_qq(40) - direct).abs() < 1e-11);
    }

    #[test]
    fn extends_beyond_cache() {
        let small = QParam::with_cache_size(0.9, 8).unwrap();
        let big = QParam::new(0.9).unwrap();
        for k in [9, 20, 100] {
            assert!((small.qq(k) / big.qq(k) - 1.0).abs() < 1e-13);
            assert!((small.ln_qq(k) - big.ln_qq(k)).abs() < 1e-13);
        }
    }
}
