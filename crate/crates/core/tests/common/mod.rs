//! Double-double reference arithmetic (about 32 significant digits) for
//! oracle values that are computed independently of the library.

#![allow(dead_code)]

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn powi(self, mut n: u32) -> Dd {
        let mut base = self;
        let mut acc = Dd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        // one Newton step from the f64 root
        let x = self.hi.sqrt();
        let (p, e) = two_prod(x, x);
        let r = ((self.hi - p) - e + self.lo) / (2.0 * x);
        let (hi, lo) = quick_two_sum(x, r);
        Dd { hi, lo }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn new(z: Complex64) -> Cdd {
        Cdd {
            re: Dd::new(z.re),
            im: Dd::new(z.im),
        }
    }

    pub fn real(x: Dd) -> Cdd {
        Cdd {
            re: x,
            im: Dd::ZERO,
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(self, x: Dd) -> Cdd {
        Cdd {
            re: self.re * x,
            im: self.im * x,
        }
    }

    pub fn norm(self) -> Dd {
        (self.re * self.re + self.im * self.im).sqrt()
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, o: Cdd) -> Cdd {
        Cdd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// `(a;q)_inf` by the plain product, stopped once `|a| q^k < 1e-34`.
pub fn qpoch_inf(a: Complex64, q: f64) -> Cdd {
    let q = Dd::new(q);
    let mut aqk = Cdd::new(a);
    let mut prod = Cdd::real(Dd::ONE);
    while aqk.norm().hi > 1e-34 {
        prod = prod * (Cdd::real(Dd::ONE) - aqk);
        aqk = aqk.scale(q);
    }
    prod
}

/// `prod_{k=1}^{factors} (1 - q^k)`, the fixed-length product oracle.
pub fn qq_product(q: f64, factors: u32) -> Dd {
    let qd = Dd::new(q);
    let mut qk = qd;
    let mut prod = Dd::ONE;
    for _ in 0..factors {
        prod = prod * (Dd::ONE - qk);
        qk = qk * qd;
    }
    prod
}

/// `A_q(z)` by its power series, each term built from the previous one,
/// stopped once terms fall below `1e-34` of the running magnitude and the
/// term ratio is below 1/2.
pub fn aq(z: Complex64, q: f64) -> Cdd {
    let qd = Dd::new(q);
    let mz = Cdd::new(-z);
    let mut term = Cdd::real(Dd::ONE);
    let mut sum = term;
    let mut scale = Dd::ONE;
    let mut k = 0u32;
    loop {
        // t_{k+1} = t_k * (-z) q^{2k+1} / (1 - q^{k+1})
        let f = qd.powi(2 * k + 1) / (Dd::ONE - qd.powi(k + 1));
        term = (term * mz).scale(f);
        sum = sum + term;
        let m = sum.norm();
        if m.hi > scale.hi {
            scale = m;
        }
        k += 1;
        let ratio = (f * Cdd::new(z).norm()).hi;
        if ratio < 0.5 && term.norm().hi <= 1e-34 * scale.hi.max(1.0) {
            return sum;
        }
    }
}

/// Rogers-Ramanujan product `1 / ((q;q^5)_inf (q^4;q^5)_inf)`, which equals
/// `A_q(-1) = sum_k q^{k^2} / (q;q)_k`.
pub fn rogers_ramanujan(q: f64) -> Dd {
    let qd = Dd::new(q);
    let q5 = qd.powi(5);
    let mut a = qd;
    let mut b = qd.powi(4);
    let mut prod = Dd::ONE;
    while b.hi > 1e-34 || a.hi > 1e-34 {
        prod = prod * (Dd::ONE - a) * (Dd::ONE - b);
        a = a * q5;
        b = b * q5;
    }
    Dd::ONE / prod
}

/// `sum_k [n,k]_q q^{k(k-n)} (-1)^k e^{(n-2k) xi}` with `e^{xi}` given.
pub fn im_direct(n: u32, exp_xi: f64, q: f64) -> Dd {
    let qd = Dd::new(q);
    let e = Dd::new(exp_xi);
    let mut sum = Dd::ZERO;
    for k in 0..=n {
        let mut binom = Dd::ONE;
        for j in 0..k {
            binom = binom * (Dd::ONE - qd.powi(n - j)) / (Dd::ONE - qd.powi(j + 1));
        }
        // q^{k(k-n)} = 1 / q^{k(n-k)}
        let qpow = Dd::ONE / qd.powi(k * (n - k));
        let epow = if n >= 2 * k {
            e.powi(n - 2 * k)
        } else {
            Dd::ONE / e.powi(2 * k - n)
        };
        let t = binom * qpow * epow;
        sum = if k % 2 == 0 { sum + t } else { sum - t };
    }
    sum
}
