//! Certified summation of series given by a term ratio.
//!
//! `t_0` is supplied and `t_{k+1} = t_k r_k`. The caller also supplies a
//! bound `rho_k >= |r_j|` valid for every `j >= k` (the ratio bounds used in
//! this crate are non-increasing in `k`). Once `rho_K < 1` the dropped tail
//! is bounded by `|t_K| rho_K / (1 - rho_K)`.
//!
//! Terms are kept as `mantissa * 2^scale` so that series whose terms pass
//! through astronomically large values (A_q at large |z|) can be summed
//! without overflow; rescaling by powers of two is exact.

use num_complex::Complex64;

use super::certified::{gamma, EPS};
use super::logscaled::LogScaled;
use super::sum::{ldexp, ComplexSum};
use crate::error::{QError, Result};

/// One step of a ratio series.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Ratio {
    pub r: Complex64,
    /// Upper bound on `|r_j|` for all `j >= k`.
    pub rho: f64,
    /// Rounding errors committed while forming `r`, in units of `EPS`.
    pub err_units: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum StopRule {
    /// Dropped tail at most `tol` in absolute terms.
    Absolute(f64),
    /// Dropped tail at most `tol * |sum|`.
    Relative(f64),
}

/// Result of a ratio-series summation: `sum * 2^scale`, with error bounds in
/// the same scaled units.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledSum {
    pub sum: Complex64,
    pub scale: i32,
    pub truncation: f64,
    pub rounding: f64,
    pub terms: usize,
}

impl ScaledSum {
    pub fn value(&self) -> Complex64 {
        Complex64::new(
            ldexp(self.sum.re, self.scale),
            ldexp(self.sum.im, self.scale),
        )
    }

    pub fn error(&self) -> f64 {
        ldexp(self.truncation + self.rounding, self.scale)
    }

    pub fn log_scaled(&self) -> LogScaled<Complex64> {
        LogScaled::from_scaled(self.sum, self.scale as f64 * std::f64::consts::LN_2)
    }

    /// Error relative to `|sum|`; infinite when the sum is zero but the
    /// error is not.
    pub fn rel_error(&self) -> f64 {
        let e = self.truncation + self.rounding;
        let m = self.sum.norm();
        if e == 0.0 {
            0.0
        } else if m == 0.0 {
            f64::INFINITY
        } else {
            e / m
        }
    }
}

const RESCALE_ABOVE: f64 = 1e150;
const MAX_TERMS: usize = 2_000_000;

pub(crate) fn sum_ratio_series(
    first: Complex64,
    mut ratio: impl FnMut(usize) -> Ratio,
    stop: StopRule,
) -> Result<ScaledSum> {
    let mut acc = ComplexSum::new();
    let mut term = first;
    let mut scale = 0i32;
    let mut rel_units = 0.0f64;
    // sum_k |t_k| gamma(rel_k), and sum_k |t_k|, both in scaled units
    let mut weighted_abs = 0.0f64;
    let mut abs_sum = 0.0f64;

    let mut k = 0usize;
    loop {
        if term.norm() > RESCALE_ABOVE {
            let e = -(term.norm().log2().floor() as i32);
            term = Complex64::new(ldexp(term.re, e), ldexp(term.im, e));
            acc.scale_pow2(e);
            weighted_abs = ldexp(weighted_abs, e);
            abs_sum = ldexp(abs_sum, e);
            scale -= e;
        }
        let tmag = term.norm();
        acc.add(term);
        abs_sum += tmag;
        weighted_abs += tmag * gamma(rel_units + 1.0);

        let step = ratio(k);
        let tail = if step.rho < 1.0 {
            tmag * step.rho / (1.0 - step.rho)
        } else {
            f64::INFINITY
        };
        let done = match stop {
            StopRule::Absolute(tol) => ldexp(tail, scale) <= tol,
            StopRule::Relative(tol) => {
                tail <= tol * acc.sum().norm() || tail <= EPS * EPS * abs_sum
            }
        };
        if done {
            let n = (k + 1) as f64;
            let s = acc.sum();
            // Neumaier: |err| <= 2u|S| + O(n u^2) sum|t|
            let rounding =
                weighted_abs * 1.01 + 2.0 * EPS * s.norm() + 2.0 * n * EPS * EPS * abs_sum;
            return Ok(ScaledSum {
                sum: s,
                scale,
                truncation: if tail.is_finite() { tail } else { 0.0 },
                rounding,
                terms: k + 1,
            });
        }
        if k >= MAX_TERMS {
            return Err(QError::NonConvergent(format!(
                "series tail still above tolerance after {MAX_TERMS} terms"
            )));
        }
        term *= step.r;
        // complex product contributes at most ~3 roundings
        rel_units += step.err_units + 3.0;
        k += 1;
    }
}

/// Rounding units committed by `q.powi(e)`.
pub(crate) fn powi_units(e: u64) -> f64 {
    2.0 * (64 - e.max(1).leading_zeros()) as f64 + 1.0
}
