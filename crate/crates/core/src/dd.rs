//! Minimal double-double arithmetic (real and complex), used where a formula
//! subtracts two nearly equal products of series values.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub(crate) const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub(crate) fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, y: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, y.hi);
        let (t, f) = two_sum(self.lo, y.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, y: Dd) -> Dd {
        self + (-y)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, y: Dd) -> Dd {
        let p = self.hi * y.hi;
        let e = self.hi.mul_add(y.hi, -p) + (self.hi * y.lo + self.lo * y.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, y: Dd) -> Dd {
        let q1 = self.hi / y.hi;
        let r = self - y * Dd::from_f64(q1);
        let q2 = r.hi / y.hi;
        let r = r - y * Dd::from_f64(q2);
        let q3 = r.hi / y.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::from_f64(q3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Cdd {
    pub(crate) re: Dd,
    pub(crate) im: Dd,
}

impl Cdd {
    pub(crate) fn new(z: Complex64) -> Self {
        Cdd { re: Dd::from_f64(z.re), im: Dd::from_f64(z.im) }
    }

    pub(crate) fn real(x: f64) -> Self {
        Cdd { re: Dd::from_f64(x), im: Dd::default() }
    }

    pub(crate) fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub(crate) fn norm(self) -> f64 {
        self.to_c64().norm()
    }

    pub(crate) fn scale(self, s: Dd) -> Cdd {
        Cdd { re: self.re * s, im: self.im * s }
    }

    pub(crate) fn inv(self) -> Cdd {
        Cdd::real(1.0) / self
    }

    pub(crate) fn powi(self, n: i32) -> Cdd {
        let mut base = if n < 0 { self.inv() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = Cdd::real(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, y: Cdd) -> Cdd {
        Cdd { re: self.re + y.re, im: self.im + y.im }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, y: Cdd) -> Cdd {
        Cdd { re: self.re - y.re, im: self.im - y.im }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, y: Cdd) -> Cdd {
        Cdd { re: self.re * y.re - self.im * y.im, im: self.re * y.im + self.im * y.re }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, y: Cdd) -> Cdd {
        let d = y.re * y.re + y.im * y.im;
        Cdd { re: (self.re * y.re + self.im * y.im) / d, im: (self.im * y.re - self.re * y.im) / d }
    }
}
