//! Sign/phase plus natural-log magnitude representation.
//!
//! Quantities such as `q^{-n^2 t} u^n` leave the `f64` range long before the
//! polynomials they scale stop being interesting, so they are carried as
//! `phase * exp(log_mag)`. For real values the phase is a sign in
//! `{-1, 0, +1}`; for complex values it is a unit phasor (or zero).

use std::fmt;
use std::ops::{Div, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Scalar types that can serve as the phase of a [`LogScaled`].
pub trait Phase: Copy + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn magnitude(self) -> f64;
    /// `self / |self|`, or zero for zero.
    fn unit(self) -> Self;
    fn times(self, other: Self) -> Self;
    fn over(self, other: Self) -> Self;
    fn scaled(self, factor: f64) -> Self;
}

impl Phase for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn unit(self) -> Self {
        if self == 0.0 {
            0.0
        } else {
            self.signum()
        }
    }
    fn times(self, other: Self) -> Self {
        self * other
    }
    fn over(self, other: Self) -> Self {
        self / other
    }
    fn scaled(self, factor: f64) -> Self {
        self * factor
    }
}

impl Phase for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn unit(self) -> Self {
        let m = self.norm();
        if m == 0.0 {
            Self::zero()
        } else {
            self / m
        }
    }
    fn times(self, other: Self) -> Self {
        (self * other).unit()
    }
    fn over(self, other: Self) -> Self {
        (self / other).unit()
    }
    fn scaled(self, factor: f64) -> Self {
        self * factor
    }
}

/// `sign * exp(log_mag)`; `log_mag` is ignored when the sign is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogScaled<T = f64> {
    sign: T,
    log_mag: f64,
}

impl<T: Phase> LogScaled<T> {
    pub fn zero() -> Self {
        Self {
            sign: T::zero(),
            log_mag: f64::NEG_INFINITY,
        }
    }

    pub fn one() -> Self {
        Self {
            sign: T::one(),
            log_mag: 0.0,
        }
    }

    /// Build from an explicit phase and log-magnitude. The phase is
    /// normalized to unit length.
    pub fn from_parts(sign: T, log_mag: f64) -> Self {
        let sign = sign.unit();
        if sign == T::zero() || log_mag == f64::NEG_INFINITY {
            Self::zero()
        } else {
            Self { sign, log_mag }
        }
    }

    /// `mantissa * exp(log_scale)` for an arbitrary finite mantissa.
    pub fn from_scaled(mantissa: T, log_scale: f64) -> Self {
        let m = mantissa.magnitude();
        if m == 0.0 {
            Self::zero()
        } else {
            Self::from_parts(mantissa, log_scale + m.ln())
        }
    }

    pub fn from_value(x: T) -> Self {
        Self::from_scaled(x, 0.0)
    }

    /// `exp(log_mag)`, the magnitude as a log-scaled positive real.
    pub fn abs(&self) -> LogScaled<f64> {
        if self.is_zero() {
            LogScaled::zero()
        } else {
            LogScaled {
                sign: 1.0,
                log_mag: self.log_mag,
            }
        }
    }

    pub fn sign(&self) -> T {
        self.sign
    }

    /// Natural log of the magnitude; `-inf` for zero.
    pub fn log_mag(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.log_mag
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == T::zero()
    }

    /// Native value; overflows to infinity or underflows to zero outside
    /// the representable range.
    pub fn to_value(&self) -> T {
        if self.is_zero() {
            T::zero()
        } else {
            self.sign.scaled(self.log_mag.exp())
        }
    }

    /// True when `to_value` yields a finite, nonzero-when-nonzero result.
    pub fn is_representable(&self) -> bool {
        self.is_zero() || (self.log_mag < f64::MAX.ln() && self.log_mag > f64::MIN_POSITIVE.ln())
    }

    pub fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Self::one();
        }
        if self.is_zero() {
            return Self::zero();
        }
        let mut phase = T::one();
        let base = if n > 0 {
            self.sign
        } else {
            T::one().over(self.sign)
        };
        for _ in 0..n.unsigned_abs() {
            phase = phase.times(base);
        }
        Self::from_parts(phase, self.log_mag * n as f64)
    }

    pub fn recip(&self) -> Self {
        Self::from_parts(T::one().over(self.sign), -self.log_mag)
    }

    /// Multiply by `exp(delta)`.
    pub fn shift_log(&self, delta: f64) -> Self {
        Self::from_parts(self.sign, self.log_mag + delta)
    }
}

impl LogScaled<f64> {
    pub fn signum(&self) -> f64 {
        self.sign
    }
}

impl LogScaled<Complex64> {
    /// Real projection when the phase is real to within `tol`.
    pub fn to_real(&self, tol: f64) -> Option<LogScaled<f64>> {
        if self.is_zero() {
            return Some(LogScaled::zero());
        }
        if self.sign.im.abs() > tol {
            return None;
        }
        Some(LogScaled::from_parts(self.sign.re.signum(), self.log_mag))
    }
}

impl From<LogScaled<f64>> for LogScaled<Complex64> {
    fn from(x: LogScaled<f64>) -> Self {
        LogScaled::from_parts(Complex64::new(x.sign, 0.0), x.log_mag)
    }
}

impl<T: Phase> Mul for LogScaled<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.sign.times(rhs.sign), self.log_mag + rhs.log_mag)
    }
}

impl<T: Phase> Div for LogScaled<T> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_parts(self.sign.over(rhs.sign), self.log_mag - rhs.log_mag)
    }
}

impl fmt::Display for LogScaled<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            let sign = if self.sign < 0.0 { "-" } else { "" };
            write!(f, "{sign}exp({})", self.log_mag)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_sign_conventions() {
        let z = LogScaled::from_value(0.0);
        assert!(z.is_zero());
        assert_eq!(z.to_value(), 0.0);
        assert_eq!(z.log_mag(), f64::NEG_INFINITY);
        let m = LogScaled::from_value(-2.5);
        assert_eq!(m.signum(), -1.0);
        assert!((m.to_value() + 2.5).abs() < 1e-15);
    }

    #[test]
    fn carries_magnitudes_beyond_f64() {
        // q^{-n^2 t} with q = 0.5, n = 40, t = 2 is 2^3200
        let big = LogScaled::from_parts(1.0, 3200.0 * std::f64::consts::LN_2);
        assert!(!big.is_representable());
        assert_eq!(big.to_value(), f64::INFINITY);
        let back = big * big.recip();
        assert!((back.to_value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_powers_track_phase() {
        let i = LogScaled::from_value(Complex64::new(0.0, 2.0));
        let p = i.powi(4);
        let v = p.to_value();
        assert!((v.re - 16.0).abs() < 1e-12 && v.im.abs() < 1e-12);
        assert!(p.to_real(1e-12).is_some());
        assert!(i.to_real(1e-12).is_none());
    }

    proptest! {
        #[test]
        fn round_trip(x in prop_oneof![-1e300f64..-1e-300, 1e-300f64..1e300]) {
            let ls = LogScaled::from_value(x);
            let back = ls.to_value();
            prop_assert!(((back - x) / x).abs() <= 1e-12);
            let again = LogScaled::from_value(back);
            prop_assert_eq!(again.signum(), ls.signum());
            prop_assert!((again.log_mag() - ls.log_mag()).abs() <= 1e-12 * ls.log_mag().abs().max(1.0));
        }

        #[test]
        fn product_matches_native(a in -1e150f64..1e150, b in -1e150f64..1e150) {
            prop_assume!(a != 0.0 && b != 0.0);
            let prod = (LogScaled::from_value(a) * LogScaled::from_value(b)).to_value();
            let native = a * b;
            prop_assert!(((prod - native) / native).abs() <= 1e-12);
        }
    }
}
