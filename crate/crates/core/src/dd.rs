//! Double-word ("double-double") arithmetic over a [`Real`] base type.
//!
//! Used where a power series cancels catastrophically in working precision:
//! the normalized Bessel series at |z| ≈ 25 has partial sums near 1e9 while the
//! result is O(1e-2).

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::Real;

#[inline]
fn two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum<T: Real>(a: T, b: T) -> (T, T) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod<T: Real>(a: T, b: T) -> (T, T) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd<T> {
    pub hi: T,
    pub lo: T,
}

impl<T: Real> Dd<T> {
    pub fn new(x: T) -> Self {
        Self { hi: x, lo: T::zero() }
    }

    pub fn zero() -> Self {
        Self::new(T::zero())
    }

    pub fn to_real(self) -> T {
        self.hi + self.lo
    }

    /// Unit roundoff of the double-word format, roughly eps².
    pub fn eps() -> T {
        T::epsilon() * T::epsilon() * T::lit(4.0)
    }
}

impl<T: Real> Add for Dd<T> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Self { hi, lo }
    }
}

impl<T: Real> Neg for Dd<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

impl<T: Real> Sub for Dd<T> {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl<T: Real> Mul for Dd<T> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

impl<T: Real> Div for Dd<T> {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b * Dd::new(q1);
        let q2 = r.hi / b.hi;
        let r = r - b * Dd::new(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// Complex number with double-word components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CDd<T> {
    pub re: Dd<T>,
    pub im: Dd<T>,
}

impl<T: Real> CDd<T> {
    pub fn from_complex(z: Complex<T>) -> Self {
        Self { re: Dd::new(z.re), im: Dd::new(z.im) }
    }

    pub fn real(x: T) -> Self {
        Self { re: Dd::new(x), im: Dd::zero() }
    }

    pub fn to_complex(self) -> Complex<T> {
        Complex::new(self.re.to_real(), self.im.to_real())
    }

    pub fn norm_approx(self) -> T {
        self.re.hi.hypot(self.im.hi)
    }


    pub fn div_complex(self, d: Self) -> Self {
        let den = d.re * d.re + d.im * d.im;
        let num = self * CDd { re: d.re, im: -d.im };
        Self { re: num.re / den, im: num.im / den }
    }
}

impl<T: Real> Add for CDd<T> {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        Self { re: self.re + b.re, im: self.im + b.im }
    }
}

impl<T: Real> Mul for CDd<T> {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        Self {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}
