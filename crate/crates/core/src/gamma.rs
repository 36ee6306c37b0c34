//! Complex Gamma function.
//!
//! Reflection into `Re w >= 1/2`, upward shift by the recurrence until
//! `Re w >= 15`, then the Stirling series for `ln Γ` with ten Bernoulli terms.
//! Relative error stays below 1e-13 for |w| <= 50 in `f64`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{re, Real};

/// B_{2k} / (2k (2k-1)), k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const SHIFT_TARGET: f64 = 15.0;

/// Returns the non-positive integer `w` sits on, if any.
fn pole_at<T: Real>(w: Complex<T>) -> Option<i64> {
    if w.im == T::zero() && w.re <= T::zero() && w.re == w.re.round() {
        w.re.to_i64()
    } else {
        None
    }
}

/// `sin(π w)` with the real part reduced first, so the result keeps relative
/// accuracy near the integers.
fn sin_pi<T: Real>(w: Complex<T>) -> Complex<T> {
    let k = w.re.round();
    let reduced = Complex::new(w.re - k, w.im);
    let s = (reduced * T::PI()).sin();
    let odd = k.to_i64().map(|k| k.rem_euclid(2) == 1).unwrap_or(false);
    if odd {
        -s
    } else {
        s
    }
}

/// Stirling series for `ln Γ(w)`, valid for `Re w >= SHIFT_TARGET`.
fn ln_gamma_stirling<T: Real>(w: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let half_ln_two_pi = T::lit(0.918_938_533_204_672_7);
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut term = inv;
    let mut series = Complex::new(T::zero(), T::zero());
    for c in STIRLING {
        series = series + term * T::lit(c);
        term = term * inv2;
    }
    (w - half) * w.ln() - w + half_ln_two_pi + series
}

/// Γ(w) for `Re w >= 1/2`.
fn gamma_right<T: Real>(w: Complex<T>) -> Complex<T> {
    let target = T::lit(SHIFT_TARGET);
    let mut shifted = w;
    let mut product = Complex::new(T::one(), T::zero());
    while shifted.re < target {
        product = product * shifted;
        shifted = shifted + T::one();
    }
    ln_gamma_stirling(shifted).exp() / product
}

/// Complex Gamma function.
///
/// Fails with [`Error::Pole`] at `w = 0, -1, -2, …`.
pub fn gamma<T: Real>(w: Complex<T>) -> Result<Complex<T>> {
    if let Some(k) = pole_at(w) {
        return Err(Error::Pole(format!("Gamma has a pole at w = {k}")));
    }
    if w.re >= T::lit(0.5) {
        Ok(gamma_right(w))
    } else {
        let one = re(T::one());
        Ok(re(T::PI()) / (sin_pi(w) * gamma_right(one - w)))
    }
}

/// Reciprocal Gamma function, entire; zero at the poles of Γ.
pub fn recip_gamma<T: Real>(w: Complex<T>) -> Complex<T> {
    if pole_at(w).is_some() {
        return Complex::new(T::zero(), T::zero());
    }
    if w.re >= T::lit(0.5) {
        gamma_right(w).inv()
    } else {
        let one = re(T::one());
        sin_pi(w) * gamma_right(one - w) / T::PI()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn g(re: f64, im: f64) -> Complex<f64> {
        gamma(Complex::new(re, im)).unwrap()
    }

    #[test]
    fn factorial_values() {
        assert_relative_eq!(g(1.0, 0.0).re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(g(5.0, 0.0).re, 24.0, max_relative = 1e-14);
        assert_relative_eq!(g(11.0, 0.0).re, 3_628_800.0, max_relative = 1e-14);
        assert_relative_eq!(g(0.5, 0.0).re, std::f64::consts::PI.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn large_factorials_stay_within_budget() {
        // 40! and 49! exactly representable to 16 digits
        let f40 = 8.159_152_832_478_977e47;
        assert_relative_eq!(g(41.0, 0.0).re, f40, max_relative = 1e-13);
        let f49 = 6.082_818_640_342_675e62;
        assert_relative_eq!(g(50.0, 0.0).re, f49, max_relative = 1e-13);
    }

    #[test]
    fn negative_half_integers() {
        // Γ(-1/2) = -2√π, Γ(-5/2) = -8√π/15
        let sp = std::f64::consts::PI.sqrt();
        assert_relative_eq!(g(-0.5, 0.0).re, -2.0 * sp, max_relative = 1e-14);
        assert_relative_eq!(g(-2.5, 0.0).re, -8.0 * sp / 15.0, max_relative = 1e-14);
    }

    #[test]
    fn modulus_on_imaginary_axis() {
        // |Γ(iy)|² = π / (y sinh(π y))
        for y in [0.3_f64, 1.0, 2.5, 7.0] {
            let v = g(0.0, y).norm_sqr();
            let exact = std::f64::consts::PI / (y * (std::f64::consts::PI * y).sinh());
            assert_relative_eq!(v, exact, max_relative = 1e-13);
        }
    }

    #[test]
    fn recurrence_holds_off_axis() {
        for w in [Complex::new(0.3, 1.7), Complex::new(-3.2, 0.4), Complex::new(12.0, -20.0)] {
            let lhs = gamma(w + 1.0).unwrap();
            let rhs = w * gamma(w).unwrap();
            assert!((lhs - rhs).norm() <= 1e-13 * lhs.norm());
        }
    }

    #[test]
    fn poles_are_reported() {
        for k in [0.0, -1.0, -7.0] {
            let err = gamma(Complex::new(k, 0.0)).unwrap_err();
            assert!(matches!(err, Error::Pole(ref m) if m.contains(&format!("{}", k as i64))));
            assert_eq!(recip_gamma(Complex::new(k, 0.0)), Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn single_precision_instantiation() {
        let v = gamma(Complex::new(5.0_f32, 0.0)).unwrap();
        assert!((v.re - 24.0).abs() < 1e-4);
    }
}
