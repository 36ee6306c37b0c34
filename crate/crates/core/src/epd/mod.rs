//! The propagator `f ↦ f ∗ m_α^t` of the Euler–Poisson–Darboux equation
//!
//! ```text
//! Δ_x u = u_tt + ((n − 1 + 2α)/t) u_t,   u(x, 0) = f(x),   u_t(x, 0) = 0,
//! ```
//!
//! realized on periodic grids through its Fourier multiplier
//! `Γ(α + n/2) j_ν(t|ξ|)`, `ν = α + (n − 2)/2`. Since `ν + 1 = α + n/2` the
//! multiplier is `Γ(ν+1) j_ν`, exactly 1 at `ξ = 0`.
//!
//! `n = 1` is accepted as well (`ν = α − 1/2`).

mod quadrature;

pub use quadrature::{asgeirsson_check_quadrature, m_alpha_quadrature, spherical_mean, SphericalMean};

use num_complex::Complex;
use serde::Serialize;

use crate::bessel::BesselEvaluator;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::scalar::{re, Real};

/// Distance from a pole of `Γ(α + n/2)` below which `α` is rejected.
pub const POLE_GUARD: f64 = 1e-6;

/// Multiplier `Γ(α + n/2) j_ν(t|ξ|)` for fixed `α` and `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpdMultiplier<T> {
    alpha: Complex<T>,
    dim: usize,
    evaluator: BesselEvaluator<T>,
}

impl<T: Real> EpdMultiplier<T> {
    pub fn new(alpha: Complex<T>, dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Invalid(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        let half = T::from_usize_lossy(dim) / T::lit(2.0);
        let w = alpha + half;
        let nearest = w.re.round().min(T::zero());
        if (w - nearest).norm() < T::lit(POLE_GUARD) {
            return Err(Error::Pole(format!(
                "α = {alpha} is within {POLE_GUARD:e} of the pole α = {} of Γ(α + n/2) for n = {dim}",
                nearest - half
            )));
        }
        let nu = alpha + (T::from_usize_lossy(dim) - T::lit(2.0)) / T::lit(2.0);
        Ok(Self { alpha, dim, evaluator: BesselEvaluator::new(nu)? })
    }

    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `ν = α + (n − 2)/2`.
    pub fn order(&self) -> Complex<T> {
        self.evaluator.order()
    }

    /// `Γ(α + n/2)`.
    pub fn gamma_factor(&self) -> Complex<T> {
        self.evaluator.gamma_shifted()
    }

    pub fn evaluator(&self) -> &BesselEvaluator<T> {
        &self.evaluator
    }

    /// Multiplier at `(t, |ξ|)`; even in `t`.
    pub fn value(&self, t: T, xi: T) -> Complex<T> {
        self.evaluator.eval_scaled(re((t * xi).abs()))
    }
}

/// `f ∗ m_α^t` on the periodic grid.
pub fn propagate<T: Real>(f: &GridFunction<T>, t: T, alpha: Complex<T>) -> Result<GridFunction<T>> {
    let m = EpdMultiplier::new(alpha, f.dim())?;
    propagate_with(f, t, &m)
}

pub fn propagate_with<T: Real>(f: &GridFunction<T>, t: T, m: &EpdMultiplier<T>) -> Result<GridFunction<T>> {
    if m.dim() != f.dim() {
        return Err(Error::Invalid("multiplier and grid dimensions differ".into()));
    }
    if !t.is_finite() {
        return Err(Error::Invalid("time must be finite".into()));
    }
    f.apply_radial(|xi| Ok(m.value(t, xi)))
}

fn lattice_index<T: Real>(lambda: T, length: T) -> Result<T> {
    let k = lambda * length / T::TAU();
    if (k - k.round()).abs() > T::lit(1e-9) * k.abs().max(T::one()) {
        return Err(Error::Domain(format!("λ = {lambda} is not on the frequency lattice 2πk/{length}")));
    }
    Ok(k.round())
}

/// `‖propagate(cos λx₁) − Γ(α+n/2) j_ν(λt) cos λx₁‖_∞ / ‖cos λx₁‖_∞`.
pub fn eigen_check<T: Real>(
    lambda: T,
    t: T,
    alpha: Complex<T>,
    dim: usize,
    points: usize,
    length: T,
) -> Result<T> {
    lattice_index(lambda, length)?;
    let f = GridFunction::cosine(dim, points, length, lambda)?;
    let m = EpdMultiplier::new(alpha, dim)?;
    let u = propagate_with(&f, t, &m)?;
    let expect = f.scale(m.value(t, lambda));
    Ok(u.max_abs_diff(&expect)? / f.sup_norm())
}

/// Sup-norm residual of the EPD equation at each `t`, with centred
/// differences of step `h_t` in time and the spectral Laplacian in space.
pub fn epd_residual<T: Real>(f: &GridFunction<T>, alpha: Complex<T>, t_values: &[T], h_t: T) -> Result<Vec<T>> {
    if !(h_t > T::zero()) {
        return Err(Error::Domain("time step must be positive".into()));
    }
    let m = EpdMultiplier::new(alpha, f.dim())?;
    let coef_base = T::from_usize_lossy(f.dim()) - T::one();
    let mut out = Vec::with_capacity(t_values.len());
    for &t in t_values {
        if t.abs() < T::lit(4.0) * h_t {
            return Err(Error::Domain(format!(
                "t = {t} is within 4 h_t of the singular time 0 (h_t = {h_t})"
            )));
        }
        let minus = propagate_with(f, t - h_t, &m)?;
        let mid = propagate_with(f, t, &m)?;
        let plus = propagate_with(f, t + h_t, &m)?;
        let lap = mid.laplacian();
        let coef = (alpha * T::lit(2.0) + coef_base) / t;
        let h2 = h_t * h_t;
        let r = lap
            .values()
            .iter()
            .zip(minus.values().iter().zip(mid.values().iter().zip(plus.values())))
            .fold(T::zero(), |worst, (l, (a, (b, c)))| {
                let u_tt = (c - b * T::lit(2.0) + a) / h2;
                let u_t = (c - a) / (h_t * T::lit(2.0));
                worst.max((l - u_tt - coef * u_t).norm())
            });
        out.push(r);
    }
    Ok(out)
}

/// Observed order `log₂(r(h)/r(h/2))` of the residual at time `t`.
pub fn residual_order<T: Real>(f: &GridFunction<T>, alpha: Complex<T>, t: T, h_t: T) -> Result<T> {
    let coarse = epd_residual(f, alpha, &[t], h_t)?[0];
    let fine = epd_residual(f, alpha, &[t], h_t / T::lit(2.0))?[0];
    Ok((coarse / fine).log2())
}

/// `max |U(s,t) − U(t,s)|` over all pairs of `times`, with
/// `U(s,t) = (f ∗ m^t ∗ m^s)(x)` evaluated at the grid point `x`.
pub fn asgeirsson_check<T: Real>(
    f: &GridFunction<T>,
    alpha: Complex<T>,
    x: &[usize],
    times: &[T],
) -> Result<T> {
    let m = EpdMultiplier::new(alpha, f.dim())?;
    let first: Vec<GridFunction<T>> = times.iter().map(|&t| propagate_with(f, t, &m)).collect::<Result<_>>()?;
    let mut table = vec![vec![Complex::new(T::zero(), T::zero()); times.len()]; times.len()];
    for (i, u) in first.iter().enumerate() {
        for (j, &s) in times.iter().enumerate() {
            table[j][i] = propagate_with(u, s, &m)?.at(x);
        }
    }
    let mut worst = T::zero();
    for (i, row) in table.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            worst = worst.max((v - table[j][i]).norm());
        }
    }
    Ok(worst)
}

/// Lower envelope of `|j_ν|` within `π/(2t)` of each frequency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlowDecrease {
    /// Largest `c` with `max_{|s−ξ| ≤ π/(2t)} |j_ν(ts)| ≥ c (1 + tξ)^{−Re ν − 1/2}` on the grid.
    pub c: f64,
    /// Least-squares slope of `log max|j_ν|` against `log(1 + tξ)` on the upper half of the range.
    pub exponent: f64,
    /// `−Re ν − 1/2`.
    pub expected_exponent: f64,
    pub samples: usize,
}

pub fn slow_decrease_profile<T: Real>(nu: Complex<T>, t: T, xi_max: T) -> Result<SlowDecrease> {
    if !(t > T::zero()) {
        return Err(Error::Domain("t must be positive".into()));
    }
    if !(xi_max > T::zero()) {
        return Err(Error::Domain("ξ_max must be positive".into()));
    }
    let ev = BesselEvaluator::new(nu)?;
    let t = t.as_f64();
    let xi_max = xi_max.as_f64();
    let reach = std::f64::consts::PI / (2.0 * t);
    let step = reach / 4.0;
    let expected = -nu.re.as_f64() - 0.5;
    let count = (xi_max / step).ceil() as usize;
    let mut c = f64::INFINITY;
    let mut pts = Vec::with_capacity(count + 1);
    for i in 0..=count {
        let xi = i as f64 * step;
        let best = (0..=64)
            .map(|j| xi - reach + 2.0 * reach * j as f64 / 64.0)
            .map(|s| ev.eval(re(T::lit(t * s.abs()))).norm().as_f64())
            .fold(0.0f64, f64::max);
        let base = (1.0 + t * xi).powf(expected);
        c = c.min(best / base);
        pts.push(((1.0 + t * xi).ln(), best.ln()));
    }
    let upper: Vec<_> = pts[pts.len() / 2..].to_vec();
    let n = upper.len() as f64;
    let (sx, sy) = upper.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = upper.iter().fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
    Ok(SlowDecrease { c, exponent: num / den, expected_exponent: expected, samples: pts.len() })
}
