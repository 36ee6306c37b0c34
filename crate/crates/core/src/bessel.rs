//! Normalized Bessel functions `j_ν(z) = (z/2)^{-ν} J_ν(z)` of complex order.
//!
//! `j_ν` is even and entire in `z`. Small arguments are summed from the power
//! series in double-word arithmetic (the partial sums cancel by up to ten
//! orders of magnitude at |z| ≈ 25); large arguments use Hankel's expansion,
//! summed until its terms stop decreasing. The switch happens at
//! `crossover_radius` (default 25).
//!
//! Supported window: |ν| ≤ 5. Uniform asymptotics for ν ≈ z are not provided.

use num_complex::Complex;

use crate::dd::{CDd, Dd};
use crate::error::{Error, Result};
use crate::gamma::{gamma, recip_gamma};
use crate::scalar::{is_finite_complex, re, Real};

pub const DEFAULT_CROSSOVER_RADIUS: f64 = 25.0;
pub const MIN_CROSSOVER_RADIUS: f64 = 10.0;
/// Relative truncation target for the power series.
pub const DEFAULT_SERIES_TOLERANCE: f64 = 1e-17;
/// Below this modulus Hankel's expansion is refused.
pub const MIN_ASYMPTOTIC_RADIUS: f64 = 10.0;

const SERIES_MAX_TERMS: usize = 1000;
const HANKEL_MAX_TERMS: usize = 200;

/// Checks that `ν` is finite and not a negative integer.
pub fn check_order<T: Real>(order: Complex<T>) -> Result<()> {
    if !is_finite_complex(order) {
        return Err(Error::Invalid(format!("order {order} is not finite")));
    }
    if order.im == T::zero() && order.re < T::zero() && order.re == order.re.round() {
        return Err(Error::Pole(format!(
            "order ν = {} is a negative integer; Γ(ν+1) has a pole at {}",
            order.re,
            order.re + T::one()
        )));
    }
    Ok(())
}

/// Evaluator for `j_ν` and `j_ν'` at a fixed complex order.
///
/// Immutable after construction; shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselEvaluator<T> {
    order: Complex<T>,
    series_tolerance: T,
    crossover_radius: T,
    /// Γ(ν+1)
    gamma_shifted: Complex<T>,
    /// 1/Γ(ν+1)
    recip_gamma_shifted: Complex<T>,
}

impl<T: Real> BesselEvaluator<T> {
    pub fn new(order: Complex<T>) -> Result<Self> {
        check_order(order)?;
        let shifted = order + T::one();
        Ok(Self {
            order,
            series_tolerance: T::lit(DEFAULT_SERIES_TOLERANCE),
            crossover_radius: T::lit(DEFAULT_CROSSOVER_RADIUS),
            gamma_shifted: gamma(shifted)?,
            recip_gamma_shifted: recip_gamma(shifted),
        })
    }

    pub fn real(order: T) -> Result<Self> {
        Self::new(re(order))
    }

    pub fn with_crossover_radius(mut self, radius: T) -> Result<Self> {
        if !(radius >= T::lit(MIN_CROSSOVER_RADIUS)) || !radius.is_finite() {
            return Err(Error::Invalid(format!(
                "crossover radius {radius} must be finite and >= {MIN_CROSSOVER_RADIUS}"
            )));
        }
        self.crossover_radius = radius;
        Ok(self)
    }

    pub fn with_series_tolerance(mut self, tolerance: T) -> Result<Self> {
        if !(tolerance > T::zero()) || !tolerance.is_finite() {
            return Err(Error::Invalid(format!("series tolerance {tolerance} must be positive")));
        }
        self.series_tolerance = tolerance;
        Ok(self)
    }

    pub fn order(&self) -> Complex<T> {
        self.order
    }

    pub fn crossover_radius(&self) -> T {
        self.crossover_radius
    }

    pub fn series_tolerance(&self) -> T {
        self.series_tolerance
    }

    /// Γ(ν+1), the reciprocal of `j_ν(0)`.
    pub fn gamma_shifted(&self) -> Complex<T> {
        self.gamma_shifted
    }

    /// `j_ν(z)` from the power series.
    pub fn series(&self, z: Complex<T>) -> Result<Complex<T>> {
        self.series_with_tolerance(z, self.series_tolerance)
    }

    pub fn series_with_tolerance(&self, z: Complex<T>, tolerance: T) -> Result<Complex<T>> {
        Ok(series_sum(self.order, z, tolerance, self.gamma_shifted)? * self.recip_gamma_shifted)
    }

    /// `j_ν(z)` from Hankel's expansion; requires |z| ≥ 10.
    pub fn asymptotic(&self, z: Complex<T>) -> Result<Complex<T>> {
        hankel(self.order, z)
    }

    /// `j_ν(z)`, dispatching on |z| against the crossover radius.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.eval_scaled(z) * self.recip_gamma_shifted
    }

    pub fn eval_real(&self, x: T) -> Complex<T> {
        self.eval(re(x))
    }

    /// `Γ(ν+1) j_ν(z)`, which equals 1 at the origin exactly.
    ///
    /// This is the Bessel multiplier of the propagator (`ν + 1 = α + n/2`).
    pub fn eval_scaled(&self, z: Complex<T>) -> Complex<T> {
        scaled(self.order, z, self.crossover_radius, self.series_tolerance, self.gamma_shifted)
    }

    /// `j_ν'(z) = -(z/2) j_{ν+1}(z)`.
    pub fn derivative(&self, z: Complex<T>) -> Complex<T> {
        let next = self.order + T::one();
        // Γ(ν+2) = (ν+1) Γ(ν+1); ν+1 ≠ 0 for admissible ν
        let gamma_next = self.gamma_shifted * next;
        let j_next = scaled(next, z, self.crossover_radius, self.series_tolerance, gamma_next) / gamma_next;
        -(z * T::lit(0.5)) * j_next
    }

    /// Amplitude of `j_ν` near `z` from the leading Hankel term:
    /// `|2^{ν+1/2} z^{-ν-1/2}| / √π · cosh(|Im z| + π|Im ν|/2)`.
    pub fn envelope(&self, z: Complex<T>) -> T {
        envelope(self.order, z)
    }
}

/// `j_ν(z)` for a one-off evaluation.
pub fn j<T: Real>(order: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    Ok(BesselEvaluator::new(order)?.eval(z))
}

/// `j_ν'(z)` for a one-off evaluation.
pub fn j_derivative<T: Real>(order: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    Ok(BesselEvaluator::new(order)?.derivative(z))
}

pub fn envelope<T: Real>(order: Complex<T>, z: Complex<T>) -> T {
    let z = if z.re < T::zero() { -z } else { z };
    let half = T::lit(0.5);
    let p = order + half;
    // |2^p z^{-p}| = exp(Re(p ln 2 - p Log z))
    let log_mag = (p * T::LN_2() - p * z.ln()).re;
    let amp = log_mag.exp() / T::PI().sqrt();
    amp * (z.im.abs() + T::FRAC_PI_2() * order.im.abs()).cosh()
}

fn scaled<T: Real>(
    order: Complex<T>,
    z: Complex<T>,
    crossover: T,
    tolerance: T,
    gamma_shifted: Complex<T>,
) -> Complex<T> {
    if z.norm() < crossover {
        match series_sum(order, z, tolerance, gamma_shifted) {
            Ok(v) => return v,
            Err(_) => {
                if z.norm() < T::lit(MIN_ASYMPTOTIC_RADIUS) {
                    // the series cannot fail below the asymptotic floor for |ν| ≤ 5;
                    // fall back on a looser truncation target
                    return series_sum(order, z, T::epsilon(), gamma_shifted)
                        .unwrap_or_else(|_| Complex::new(T::nan(), T::nan()));
                }
            }
        }
    }
    match hankel(order, z) {
        Ok(v) => v * gamma_shifted,
        Err(_) => Complex::new(T::nan(), T::nan()),
    }
}

/// `Σ_k u_k` with `u_0 = 1`, `u_{k+1} = u_k · (-(z/2)²) / ((k+1)(k+1+ν))`,
/// i.e. `Γ(ν+1) j_ν(z)`.
fn series_sum<T: Real>(
    order: Complex<T>,
    z: Complex<T>,
    tolerance: T,
    gamma_shifted: Complex<T>,
) -> Result<Complex<T>> {
    if !(tolerance > T::zero()) {
        return Err(Error::Invalid("series tolerance must be positive".into()));
    }
    let half = CDd::from_complex(z * T::lit(0.5));
    let w = half * half;
    let w = CDd { re: -w.re, im: -w.im };
    let w_abs = w.norm_approx();

    let mut term = CDd::real(T::one());
    let mut sum = CDd::real(T::one());
    let mut max_term = T::one();
    let mut k = 0usize;
    let order_re = Dd::new(order.re);
    loop {
        if k >= SERIES_MAX_TERMS {
            return Err(Error::Regime(format!(
                "series for j_ν did not converge within {SERIES_MAX_TERMS} terms at |z| = {}",
                z.norm()
            )));
        }
        let kp1 = T::from_usize_lossy(k + 1);
        let den = CDd {
            re: Dd::new(kp1) * (Dd::new(kp1) + order_re),
            im: Dd::new(kp1) * Dd::new(order.im),
        };
        term = (term * w).div_complex(den);
        sum = sum + term;
        let t_abs = term.norm_approx();
        max_term = max_term.max(t_abs);
        k += 1;

        let kp1 = T::from_usize_lossy(k + 1);
        let next_den = kp1 * Complex::new(kp1 + order.re, order.im).norm();
        let ratio = w_abs / next_den;
        if ratio < T::lit(0.5) {
            // geometric tail bound with ratio < 1/2
            let tail = t_abs * ratio * T::lit(2.0);
            let s_abs = sum.norm_approx();
            if tail <= tolerance * s_abs || tail <= Dd::<T>::eps() * max_term {
                break;
            }
        }
    }

    let cancellation = max_term * Dd::<T>::eps() * T::from_usize_lossy(k + 1);
    let scale = sum.norm_approx().max(envelope(order, z) * gamma_shifted.norm());
    let budget = T::epsilon().sqrt() * T::lit(1e-2);
    if cancellation > budget * scale {
        return Err(Error::Regime(format!(
            "series for j_ν loses too many digits at |z| = {} (cancellation {:e})",
            z.norm(),
            cancellation.as_f64()
        )));
    }
    Ok(sum.to_complex())
}

/// Hankel's expansion of `j_ν(z)` for `Re z >= 0` (evenness covers the rest):
/// `j_ν(z) = 2^{ν+1/2} π^{-1/2} z^{-ν-1/2} [P cos ω - Q sin ω]`,
/// `ω = z - (ν/2 + 1/4) π`.
fn hankel<T: Real>(order: Complex<T>, z: Complex<T>) -> Result<Complex<T>> {
    let z = if z.re < T::zero() { -z } else { z };
    if z.norm() < T::lit(MIN_ASYMPTOTIC_RADIUS) {
        return Err(Error::Regime(format!(
            "Hankel expansion needs |z| >= {MIN_ASYMPTOTIC_RADIUS}, got {}",
            z.norm()
        )));
    }
    let half = T::lit(0.5);
    let mu = order * order * T::lit(4.0);
    let eight_z = z * T::lit(8.0);

    let zero = Complex::new(T::zero(), T::zero());
    let mut p = Complex::new(T::one(), T::zero());
    let mut q = zero;
    let mut term = Complex::new(T::one(), T::zero());
    let mut prev_abs = T::infinity();
    for k in 1..=HANKEL_MAX_TERMS {
        let odd = T::from_usize_lossy(2 * k - 1);
        let factor = (mu - odd * odd) / (eight_z * T::from_usize_lossy(k));
        let next = term * factor;
        let next_abs = next.norm();
        if next_abs == T::zero() {
            break;
        }
        if next_abs > prev_abs {
            // asymptotic series started to diverge; stop at the smallest term
            break;
        }
        // signs: P = t0 - t2 + t4 - …, Q = t1 - t3 + t5 - …
        let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
        if k % 2 == 0 {
            p = p + next * sign;
        } else {
            q = q + next * sign;
        }
        term = next;
        prev_abs = next_abs;
        if next_abs <= T::epsilon() * T::lit(1e-2) * (p.norm() + q.norm()) {
            break;
        }
    }

    let phase = z - (order * half + T::lit(0.25)) * T::PI();
    let bracket = p * phase.cos() - q * phase.sin();
    let power = order + half;
    let prefactor = (power * T::LN_2() - power * z.ln()).exp() / T::PI().sqrt();
    Ok(prefactor * bracket)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn ev(nu: f64) -> BesselEvaluator<f64> {
        BesselEvaluator::real(nu).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn value_at_origin_is_reciprocal_gamma() {
        for nu in [c(0.0, 0.0), c(0.5, 0.0), c(2.5, 0.0), c(1.0, 0.5), c(-0.3, 0.0)] {
            let e = BesselEvaluator::new(nu).unwrap();
            let expected = recip_gamma(nu + 1.0);
            assert!((e.series(c(0.0, 0.0)).unwrap() - expected).norm() < 1e-15);
            assert_eq!(e.eval_scaled(c(0.0, 0.0)), c(1.0, 0.0));
        }
    }

    #[test]
    fn half_order_vanishes_at_pi() {
        assert!(ev(0.5).series(c(PI, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn j0_at_one_matches_bracketed_partial_sums() {
        let (lo, hi) = oracle::j0_alternating_bracket(1.0);
        let v = ev(0.0).series_with_tolerance(c(1.0, 0.0), 1e-14).unwrap().re;
        assert!(lo - 1e-14 <= v && v <= hi + 1e-14, "{lo} <= {v} <= {hi}");
        assert!((v - 0.765_197_686_6).abs() < 1e-9);
    }

    #[test]
    fn hankel_reproduces_half_order_closed_form() {
        let v = ev(0.5).asymptotic(c(50.0, 0.0)).unwrap();
        assert!((v.re - oracle::j_half_closed(50.0)).abs() < 1e-10);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn regimes_agree_at_thirty() {
        let e = ev(0.0);
        let s = e.series_with_tolerance(c(30.0, 0.0), 1e-14).unwrap();
        let a = e.asymptotic(c(30.0, 0.0)).unwrap();
        assert!((s - a).norm() <= 1e-8 * s.norm());
    }

    #[test]
    fn hankel_refuses_small_arguments() {
        assert!(matches!(ev(0.0).asymptotic(c(5.0, 0.0)), Err(Error::Regime(_))));
    }

    #[test]
    fn series_refuses_huge_arguments() {
        assert!(matches!(ev(0.0).series(c(90.0, 0.0)), Err(Error::Regime(_))));
    }

    #[test]
    fn zeros_of_half_order() {
        let e = ev(0.5);
        for k in 1..=20 {
            let v = e.eval_real(k as f64 * PI);
            assert!(v.norm() < 1e-13, "k = {k}: {v}");
        }
    }

    #[test]
    fn first_zero_of_order_zero() {
        let z1 = oracle::bisect(|x| oracle::bessel_j_int(0, x), 2.0, 3.0, 1e-15);
        assert!((z1 - 2.404_825_557_695_773).abs() < 1e-12);
        assert!(ev(0.0).eval_real(2.404_825_557_695_773).norm() < 1e-9);
    }

    #[test]
    fn agrees_with_poisson_integral() {
        for nu in [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(2.5, 0.0), c(1.0, 0.5), c(0.3, -0.7)] {
            let e = BesselEvaluator::new(nu).unwrap();
            for x in [0.5, 3.0, 11.0, 24.0, 26.0, 37.5] {
                let expected = oracle::j_poisson(nu, x);
                let got = e.eval_real(x);
                let scale = e.envelope(c(x, 0.0)).max(got.norm());
                assert!((got - expected).norm() <= 1e-9 * scale, "ν={nu} x={x}: {got} vs {expected}");
            }
        }
    }

    #[test]
    fn bounded_on_real_line_for_nonnegative_order() {
        for nu in [0.0, 0.5, 1.0, 2.5] {
            let e = ev(nu);
            let bound = e.eval_real(0.0).re;
            let mut x = 0.0;
            while x <= 1000.0 {
                assert!(e.eval_real(x).norm() <= bound * (1.0 + 1e-12), "ν={nu} x={x}");
                x += 0.37;
            }
        }
    }

    #[test]
    fn derivative_at_half_order_zero() {
        let d = ev(0.5).derivative(c(PI, 0.0));
        assert!((d.re + 2.0 / PI.powf(1.5)).abs() < 1e-12);
        assert_eq!(ev(0.0).derivative(c(0.0, 0.0)).norm(), 0.0);
    }

    #[test]
    fn derivative_matches_central_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let h = 1e-4;
        for _ in 0..60 {
            let nu = c(rng.gen_range(-0.9..3.0), rng.gen_range(-1.0..1.0));
            let e = BesselEvaluator::new(nu).unwrap();
            let z = c(rng.gen_range(1.0..30.0), rng.gen_range(-0.5..0.5));
            let fd = (e.eval(z + h) - e.eval(z - h)) / (2.0 * h);
            let d = e.derivative(z);
            assert!((d - fd).norm() <= 1e-6, "ν={nu} z={z}: {d} vs {fd}");
        }
    }

    #[test]
    fn crossover_is_validated() {
        assert!(ev(0.0).with_crossover_radius(5.0).is_err());
        assert!(ev(0.0).with_crossover_radius(30.0).is_ok());
        assert!(ev(0.0).with_series_tolerance(0.0).is_err());
    }

    #[test]
    fn negative_integer_orders_rejected() {
        assert!(matches!(BesselEvaluator::real(-2.0), Err(Error::Pole(_))));
        assert!(BesselEvaluator::real(-0.5).is_ok());
    }

    #[test]
    fn works_in_single_precision() {
        let e = BesselEvaluator::<f32>::real(0.5).unwrap();
        let v = e.eval_real(2.0).re;
        let exact = (2.0 / std::f32::consts::PI.sqrt()) * 2.0_f32.sin() / 2.0;
        assert!((v - exact).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn even_in_argument(re_z in -40.0f64..40.0, im_z in -10.0f64..10.0, pick in 0usize..5) {
            let nus = [c(0.0, 0.0), c(0.5, 0.0), c(1.0, 0.0), c(2.5, 0.0), c(1.0, 0.5)];
            let e = BesselEvaluator::new(nus[pick]).unwrap();
            let z = c(re_z, im_z);
            prop_assume!(z.norm() <= 40.0);
            let a = e.eval(z);
            let b = e.eval(-z);
            prop_assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()));
        }
    }
}
