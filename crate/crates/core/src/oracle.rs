//! Reference values built independently of the library routines.
//!
//! Compiled only for tests; integration tests include this file by path.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// `J_n(x)` for integer `n` from `(1/2π)∫_0^{2π} cos(nθ − x sin θ) dθ`.
///
/// The integrand is periodic, so the trapezoid rule converges geometrically.
pub fn bessel_j_int(n: i32, x: f64) -> f64 {
    let m = 64 + 2 * (x.abs() as usize + n.unsigned_abs() as usize);
    let h = 2.0 * PI / m as f64;
    let mut s = 0.0;
    for k in 0..m {
        let th = k as f64 * h;
        s += (n as f64 * th - x * th.sin()).cos();
    }
    s / m as f64
}

/// `(x/2)^{-n} J_n(x)` for integer `n >= 0`.
pub fn j_int_normalized(n: i32, x: f64) -> f64 {
    bessel_j_int(n, x) / (x / 2.0).powi(n)
}

/// `(2/√π) sin x / x`.
pub fn j_half_closed(x: f64) -> f64 {
    if x == 0.0 {
        2.0 / PI.sqrt()
    } else {
        2.0 / PI.sqrt() * x.sin() / x
    }
}

/// Consecutive partial sums of the series of `j_0(x)`, |x| ≤ 2, bracketing
/// the value once the terms decrease.
pub fn j0_alternating_bracket(x: f64) -> (f64, f64) {
    let w = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = sum;
    for k in 1..30 {
        term *= -w / (k as f64 * k as f64);
        prev = sum;
        sum += term;
    }
    (prev.min(sum), prev.max(sum))
}

/// Bisection for a sign change of `f` on `[a, b]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    assert!(fa * f(b) <= 0.0, "no sign change on [{a}, {b}]");
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

/// First `count` positive zeros of `J_n` by scanning and bisection.
pub fn integer_order_zeros(n: i32, count: usize) -> Vec<f64> {
    let f = |x: f64| bessel_j_int(n, x);
    let mut out = Vec::new();
    let step = 0.1;
    let mut a = if n == 0 { 0.5 } else { n as f64 * 0.5 + 0.5 };
    while out.len() < count {
        let b = a + step;
        if f(a) * f(b) < 0.0 {
            out.push(bisect(f, a, b, 1e-14));
        }
        a = b;
    }
    out
}

const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Lanczos approximation of Γ (g = 7), about 1e-15 relative.
pub fn gamma_lanczos(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return PI / ((PI * z).sin() * gamma_lanczos(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + 7.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Poisson's integral
/// `j_ν(x) = (1/(√π Γ(ν+1/2))) ∫_{-1}^{1} (1−s²)^{ν−1/2} cos(xs) ds`, `Re ν > −1/2`.
///
/// Tanh-sinh quadrature; `1 − s²` is taken as `sech²` of the mapped variable so
/// the endpoint factor keeps full relative accuracy.
pub fn j_poisson(nu: Complex64, x: f64) -> Complex64 {
    let h = 1.0 / 128.0;
    let p = nu - 0.5;
    let mut sum = Complex64::new(0.0, 0.0);
    let n = (4.5 / h) as i64;
    for k in -n..=n {
        let t = k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let s = u.tanh();
        let sech = 1.0 / u.cosh();
        let one_minus_s2 = sech * sech;
        if one_minus_s2 == 0.0 {
            continue;
        }
        let w = 0.5 * PI * t.cosh() * one_minus_s2;
        let f = (p * one_minus_s2.ln()).exp() * (x * s).cos();
        sum += f * w;
    }
    sum * h / (PI.sqrt() * gamma_lanczos(nu + 0.5))
}

/// Continued-fraction partial quotients of `x`.
pub fn continued_fraction(mut x: f64, terms: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for _ in 0..terms {
        let a = x.floor();
        out.push(a as u64);
        let f = x - a;
        if f < 1e-12 {
            break;
        }
        x = 1.0 / f;
    }
    out
}
