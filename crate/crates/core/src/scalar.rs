//! Scalar abstraction shared by every numerical module.
//!
//! All floating-point code in this crate is written against [`Real`], which is
//! implemented for `f32` and `f64`. Accuracy targets quoted in the module docs
//! refer to `f64`; `f32` instantiations work but resolve correspondingly less.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Default + Display + LowerExp + Debug
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(k: usize) -> Self {
        Self::from_usize(k).expect("usize representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex numbers over a [`Real`] scalar.
pub type ComplexScalar<T> = Complex<T>;

/// Lifts a real value onto the real axis.
#[inline]
pub fn re<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

#[inline]
pub fn is_finite_complex<T: Real>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Parses `"re,im"` or `"re"` into a complex number.
pub fn parse_complex(s: &str) -> Option<Complex<f64>> {
    let mut parts = s.split(',').map(str::trim);
    let re: f64 = parts.next()?.parse().ok()?;
    let im: f64 = match parts.next() {
        Some(p) => p.parse().ok()?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return None;
    }
    Some(Complex::new(re, im))
}

/// Sup-norm of a complex slice.
pub fn sup_norm<T: Real>(values: &[Complex<T>]) -> T {
    values.iter().fold(T::zero(), |m, v| m.max(v.norm()))
}
