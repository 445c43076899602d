//! Compensated (Kahan-Babuska-Neumaier) accumulation for real and complex terms.

use std::ops::AddAssign;

use num_complex::Complex64;

/// Error-free transform accumulator: `sum()` carries roughly twice the
/// working precision of a naive left-to-right loop.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct NeumaierSum {
    s: f64,
    c: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    pub fn sum(&self) -> f64 {
        self.s + self.c
    }

    /// Multiply the running state by an exact power of two.
    pub(crate) fn scale_pow2(&mut self, e: i32) {
        self.s = ldexp(self.s, e);
        self.c = ldexp(self.c, e);
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Componentwise compensated sum of complex terms.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct ComplexSum {
    re: NeumaierSum,
    im: NeumaierSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn sum(&self) -> Complex64 {
        Complex64::new(self.re.sum(), self.im.sum())
    }

    pub(crate) fn scale_pow2(&mut self, e: i32) {
        self.re.scale_pow2(e);
        self.im.scale_pow2(e);
    }
}

impl AddAssign<Complex64> for ComplexSum {
    fn add_assign(&mut self, rhs: Complex64) {
        self.add(rhs);
    }
}

/// `x * 2^e`, exact unless the result leaves the normal range.
pub(crate) fn ldexp(x: f64, e: i32) -> f64 {
    let mut x = x;
    let mut e = e;
    // 2^±1000 steps keep each factor representable
    while e > 1000 {
        x *= f64::from_bits(((1023 + 1000) as u64) << 52);
        e -= 1000;
    }
    while e < -1000 {
        x *= f64::from_bits(((1023 - 1000) as u64) << 52);
        e += 1000;
    }
    x * f64::from_bits(((1023 + e) as u64) << 52)
}
