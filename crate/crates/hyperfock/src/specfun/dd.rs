//! Minimal double-double arithmetic (real and complex) for series that
//! cancel heavily in f64.

use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub fn new(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> f64 {
        self.hi.abs()
    }
}

impl Add for DD {
    type Output = DD;
    fn add(self, o: DD) -> DD {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DD { hi, lo }
    }
}

impl Neg for DD {
    type Output = DD;
    fn neg(self) -> DD {
        DD { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for DD {
    type Output = DD;
    fn sub(self, o: DD) -> DD {
        self + (-o)
    }
}

impl Mul for DD {
    type Output = DD;
    fn mul(self, o: DD) -> DD {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }
}

impl Div for DD {
    type Output = DD;
    fn div(self, o: DD) -> DD {
        let q1 = self.hi / o.hi;
        let r = self - o * DD::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DD::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DD { hi, lo } + DD::new(q3)
    }
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct CDD {
    pub re: DD,
    pub im: DD,
}

impl CDD {
    pub fn from_c64(z: Complex64) -> Self {
        CDD {
            re: DD::new(z.re),
            im: DD::new(z.im),
        }
    }

    /// z + k computed exactly in double-double.
    pub fn shifted(z: Complex64, k: f64) -> Self {
        let (hi, lo) = two_sum(z.re, k);
        CDD {
            re: DD { hi, lo },
            im: DD::new(z.im),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_approx(self) -> f64 {
        self.re.hi.hypot(self.im.hi)
    }
}

impl Add for CDD {
    type Output = CDD;
    fn add(self, o: CDD) -> CDD {
        CDD {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Mul for CDD {
    type Output = CDD;
    fn mul(self, o: CDD) -> CDD {
        CDD {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}

impl Div for CDD {
    type Output = CDD;
    fn div(self, o: CDD) -> CDD {
        let den = o.re * o.re + o.im * o.im;
        let num_re = self.re * o.re + self.im * o.im;
        let num_im = self.im * o.re - self.re * o.im;
        CDD {
            re: num_re / den,
            im: num_im / den,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_rounding_error() {
        let a = DD::new(1.0) + DD::new(1e-20);
        assert_eq!(a.hi, 1.0);
        assert!((a.lo - 1e-20).abs() < 1e-36);
        let third = DD::new(1.0) / DD::new(3.0);
        let back = third * DD::new(3.0) - DD::new(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn complex_division_roundtrip() {
        let a = CDD::from_c64(Complex64::new(1.5, -2.25));
        let b = CDD::from_c64(Complex64::new(0.3, 7.0));
        let q = a / b;
        let back = q * b;
        assert!((back.re - a.re).to_f64().abs() < 1e-30);
        assert!((back.im - a.im).to_f64().abs() < 1e-30);
    }
}
