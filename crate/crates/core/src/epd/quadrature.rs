//! Quadrature routes for the propagator, evaluated at single points from the
//! trigonometric interpolant of the grid function. `f64` only.
//!
//! `α = 0` is the spherical mean `(1/Ω_n) ∫_{S^{n−1}} f(x + tω) dω`. For
//! `Re α > 0` the propagator is the radial average
//!
//! ```text
//! Γ(α + n/2) / (π^{n/2} Γ(α)) · Ω_n · ∫₀¹ M^{tu}f(x) (1 − u²)^{α−1} u^{n−1} du,
//! ```
//!
//! integrated by Gauss–Jacobi in `u` so the endpoint singularity sits in the
//! weight.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::{FiniteAboveNegOneF64, GaussJacobi, GaussLegendre};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::grid::{sphere_area, GridFunction, Interpolant};
use crate::scalar::re;

/// Spherical means of one grid function at arbitrary centres and radii.
#[derive(Debug, Clone)]
pub struct SphericalMean {
    dim: usize,
    interp: Interpolant<f64>,
    max_freq: f64,
}

fn nz(n: usize) -> NonZeroUsize {
    NonZeroUsize::new(n).expect("positive")
}

impl SphericalMean {
    pub fn new(f: &GridFunction<f64>) -> Self {
        let interp = f.interpolant();
        let max_freq = interp.max_frequency();
        Self { dim: f.dim(), interp, max_freq }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Value of the interpolant at `x`.
    pub fn point(&self, x: &[f64]) -> Complex<f64> {
        self.interp.eval(x)
    }

    /// `M^t f(x)`.
    pub fn mean(&self, x: &[f64], t: f64) -> Complex<f64> {
        let reach = (self.max_freq * t.abs()).ceil() as usize;
        match self.dim {
            1 => (self.point(&[x[0] + t]) + self.point(&[x[0] - t])) * 0.5,
            2 => {
                // trapezoid on the circle is exact for trigonometric data of
                // degree below the point count
                let m = (2 * reach + 48).max(64);
                let mut acc = Complex::new(0.0, 0.0);
                for j in 0..m {
                    let phi = 2.0 * PI * j as f64 / m as f64;
                    acc += self.point(&[x[0] + t * phi.cos(), x[1] + t * phi.sin()]);
                }
                acc / m as f64
            }
            _ => {
                let q = (reach + 24).max(32);
                let m = (2 * reach + 48).max(64);
                let rule = GaussLegendre::new(nz(q));
                let mut acc = Complex::new(0.0, 0.0);
                for &(c, w) in rule.as_node_weight_pairs() {
                    let s = (1.0 - c * c).max(0.0).sqrt();
                    let mut ring = Complex::new(0.0, 0.0);
                    for j in 0..m {
                        let phi = 2.0 * PI * j as f64 / m as f64;
                        ring += self.point(&[x[0] + t * c, x[1] + t * s * phi.cos(), x[2] + t * s * phi.sin()]);
                    }
                    acc += ring * (w / m as f64);
                }
                // ∫ over cos θ ∈ [−1, 1] carries weight 2
                acc * 0.5
            }
        }
    }
}

/// `M^t f(x)` for `n ∈ {1, 2, 3}`.
pub fn spherical_mean(f: &GridFunction<f64>, t: f64, x: &[f64]) -> Result<Complex<f64>> {
    if x.len() != f.dim() {
        return Err(Error::Invalid("point and grid dimensions differ".into()));
    }
    Ok(SphericalMean::new(f).mean(x, t))
}

/// `(f ∗ m_α^t)(x)` by Gauss–Jacobi quadrature over spherical means; real
/// `α > 0` only.
pub fn m_alpha_quadrature(f: &GridFunction<f64>, t: f64, alpha: Complex<f64>, x: &[f64]) -> Result<Complex<f64>> {
    if alpha.re <= 0.0 || alpha.im != 0.0 {
        return Err(Error::Regime(format!(
            "quadrature route needs real α > 0, got {alpha}; use propagate for other α"
        )));
    }
    if x.len() != f.dim() {
        return Err(Error::Invalid("point and grid dimensions differ".into()));
    }
    let a = alpha.re;
    let n = f.dim() as f64;
    let sm = SphericalMean::new(f);
    // even degree: gauss-quad pins the middle node of odd-degree rules to 0,
    // which is wrong for the asymmetric weight used here
    let deg = ((sm.max_freq * t.abs()).ceil() as usize + 24).max(24).next_multiple_of(2);
    let exponent = FiniteAboveNegOneF64::new(a - 1.0).expect("α > 0");
    let rule = GaussJacobi::new(nz(deg), exponent, FiniteAboveNegOneF64::default());
    // u = (1 + s)/2 maps the Jacobi weight (1 − s)^{α−1} onto (1 − u)^{α−1}
    let mut acc = Complex::new(0.0, 0.0);
    for &(s, w) in rule.as_node_weight_pairs() {
        let u = 0.5 * (1.0 + s);
        let smooth = 0.5f64.powf(a - 1.0) * (1.0 + u).powf(a - 1.0) * u.powf(n - 1.0) * 0.5;
        acc += sm.mean(x, t * u) * (w * smooth);
    }
    let g = gamma(re(a + n / 2.0))?.re / (PI.powf(n / 2.0) * gamma(re(a))?.re);
    Ok(acc * (g * sphere_area::<f64>(f.dim())))
}

/// `max |U(s,t) − U(t,s)|` with `U(s,t) = M^s M^t f(x)` by nested quadrature
/// (`α = 0`).
pub fn asgeirsson_check_quadrature(f: &GridFunction<f64>, x: &[f64], times: &[f64]) -> Result<f64> {
    if f.dim() != 2 {
        return Err(Error::Invalid("nested quadrature check is implemented for n = 2".into()));
    }
    let sm = SphericalMean::new(f);
    let u = |s: f64, t: f64| -> Complex<f64> {
        let reach = (sm.max_freq * s).ceil() as usize;
        let m = (2 * reach + 48).max(64);
        let mut acc = Complex::new(0.0, 0.0);
        for j in 0..m {
            let phi = 2.0 * PI * j as f64 / m as f64;
            acc += sm.mean(&[x[0] + s * phi.cos(), x[1] + s * phi.sin()], t);
        }
        acc / m as f64
    };
    let mut worst = 0.0f64;
    for (i, &s) in times.iter().enumerate() {
        for &t in &times[i + 1..] {
            worst = worst.max((u(s, t) - u(t, s)).norm());
        }
    }
    Ok(worst)
}
