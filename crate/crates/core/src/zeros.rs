//! Indexed zeros `a_m` of `j_ν`.
//!
//! Real orders `ν > −1` are scanned on a grid of step π/8 (zeros sit about π
//! apart, so no cell holds two) and polished by safeguarded Newton. Complex
//! orders are refined by Newton from McMahon's expansion, starting at `m = 3`.
//! For `ν = 1/2` the zeros are `mπ` exactly.

use num_complex::Complex;

use crate::bessel::BesselEvaluator;
use crate::error::{Error, Result};
use crate::scalar::{re, Real};

/// Grid step of the sign-change scan, in units of π.
pub const SCAN_STEP_OVER_PI: f64 = 0.125;
/// First index refined for complex orders.
pub const DEFAULT_COMPLEX_START: usize = 3;

const NEWTON_MAX_ITER: usize = 100;

/// Two-term McMahon approximation `mπ + (ν − 1/2)π/2`.
pub fn mcmahon_seed<T: Real>(order: Complex<T>, m: usize) -> Complex<T> {
    let pi = T::PI();
    re(T::from_usize_lossy(m) * pi) + (order - T::lit(0.5)) * (pi * T::lit(0.5))
}

/// McMahon's expansion through `β^{-3}`, `β = (m + ν/2 − 1/4)π`.
pub fn mcmahon_refined<T: Real>(order: Complex<T>, m: usize) -> Complex<T> {
    let beta = mcmahon_seed(order, m);
    let mu = order * order * T::lit(4.0);
    let eight_beta = beta * T::lit(8.0);
    let c1 = (mu - T::one()) / eight_beta;
    let c3 = (mu - T::one()) * (mu * T::lit(7.0) - T::lit(31.0)) * T::lit(4.0)
        / (eight_beta * eight_beta * eight_beta * T::lit(3.0));
    beta - c1 - c3
}

/// A single zero with its diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroEntry<T> {
    pub index: usize,
    pub value: Complex<T>,
    /// |j_ν(value)|
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroLattice<T> {
    order: Complex<T>,
    entries: Vec<ZeroEntry<T>>,
    exact: bool,
    /// Indices at or beyond this are served by [`mcmahon_refined`].
    asymptotic_tail_start: usize,
    /// Constant `C` of the surrogate error bound `C / m³`.
    surrogate_constant: T,
    missing: Vec<usize>,
}

fn is_half<T: Real>(order: Complex<T>) -> bool {
    order.im == T::zero() && order.re == T::lit(0.5)
}

impl<T: Real> ZeroLattice<T> {
    pub fn order(&self) -> Complex<T> {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn entries(&self) -> &[ZeroEntry<T>] {
        &self.entries
    }

    pub fn missing(&self) -> &[usize] {
        &self.missing
    }

    pub fn asymptotic_tail_start(&self) -> usize {
        self.asymptotic_tail_start
    }

    pub fn surrogate_constant(&self) -> T {
        self.surrogate_constant
    }

    /// Largest index computed (not surrogate).
    pub fn computed_len(&self) -> usize {
        self.entries.last().map_or(0, |e| e.index)
    }

    /// `a_m`: exact, computed, or McMahon surrogate.
    ///
    /// Returns `None` for `m = 0` and for computed-range indices whose Newton
    /// iteration failed.
    pub fn zero(&self, m: usize) -> Option<Complex<T>> {
        if m == 0 {
            return None;
        }
        if self.exact {
            return Some(re(T::from_usize_lossy(m) * T::PI()));
        }
        if m >= self.asymptotic_tail_start {
            return Some(mcmahon_refined(self.order, m));
        }
        self.entries.iter().find(|e| e.index == m).map(|e| e.value)
    }

    /// Absolute error bound attached to `zero(m)`; zero for computed entries.
    pub fn error_bound(&self, m: usize) -> T {
        if self.exact || m < self.asymptotic_tail_start {
            T::zero()
        } else {
            self.surrogate_constant / T::from_usize_lossy(m).powi(3)
        }
    }

    /// Real zero values `a_1, …` of the computed range, in index order.
    pub fn real_values(&self) -> Vec<T> {
        self.entries.iter().map(|e| e.value.re).collect()
    }

    fn finish(order: Complex<T>, entries: Vec<ZeroEntry<T>>, missing: Vec<usize>) -> Self {
        // fit C in |a_m − surrogate(m)| ≤ C/m³ over the computed range, with a safety factor
        let mut c = T::zero();
        for e in &entries {
            let m = T::from_usize_lossy(e.index);
            let err = (e.value - mcmahon_refined(order, e.index)).norm();
            c = c.max(err * m.powi(3));
        }
        let tail = entries.last().map_or(1, |e| e.index + 1);
        Self {
            order,
            exact: is_half(order),
            entries,
            asymptotic_tail_start: tail,
            surrogate_constant: c * T::lit(2.0) + T::epsilon(),
            missing,
        }
    }
}

/// Safeguarded Newton on a real bracket `[a, b]` with a sign change.
fn refine_real<T: Real>(e: &BesselEvaluator<T>, mut a: T, mut b: T) -> T {
    let f = |x: T| e.eval_real(x).re;
    let mut fa = f(a);
    let mut x = (a + b) * T::lit(0.5);
    for _ in 0..NEWTON_MAX_ITER {
        let fx = f(x);
        if fx == T::zero() {
            return x;
        }
        if (fx < T::zero()) == (fa < T::zero()) {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let d = e.derivative(re(x)).re;
        let mut next = x - fx / d;
        if !(next > a && next < b) || !next.is_finite() {
            next = (a + b) * T::lit(0.5);
        }
        let step = (next - x).abs();
        x = next;
        if step <= T::epsilon() * T::lit(4.0) * x.abs() || b - a <= T::epsilon() * T::lit(4.0) * x.abs() {
            break;
        }
    }
    x
}

/// First `k_max` positive zeros of `j_ν` for real `ν > −1`.
pub fn real_zeros<T: Real>(order: T, k_max: usize) -> Result<ZeroLattice<T>> {
    if !(order > -T::one()) || !order.is_finite() {
        return Err(Error::Domain(format!("real_zeros needs real ν > −1, got {order}")));
    }
    if k_max == 0 {
        return Err(Error::Invalid("k_max must be at least 1".into()));
    }
    let nu = re(order);
    let e = BesselEvaluator::new(nu)?;
    let exact = is_half(nu);
    let step = T::PI() * T::lit(SCAN_STEP_OVER_PI);
    let f = |x: T| e.eval_real(x).re;

    let mut entries = Vec::with_capacity(k_max);
    let mut a = T::zero();
    let mut fa = f(a);
    // j_ν(x) has about x/π + 1 zeros in [0, x]; allow generous slack before giving up
    let limit = T::from_usize_lossy(k_max + 8) * T::PI() + T::lit(4.0) * order.abs() + T::lit(10.0);
    while entries.len() < k_max {
        if a > limit {
            return Err(Error::Internal(format!(
                "zero scan for ν = {order} exhausted at x = {a} with {} of {k_max} zeros",
                entries.len()
            )));
        }
        let b = a + step;
        let fb = f(b);
        if fb == T::zero() || (fa < T::zero()) != (fb < T::zero()) {
            let index = entries.len() + 1;
            let x = if exact {
                T::from_usize_lossy(index) * T::PI()
            } else if fb == T::zero() {
                b
            } else {
                refine_real(&e, a, b)
            };
            entries.push(ZeroEntry { index, value: re(x), residual: f(x).abs() });
            if fb == T::zero() {
                // step past the exact zero so it is not counted twice
                a = b + step * T::lit(0.5);
                fa = f(a);
                continue;
            }
        }
        a = b;
        fa = fb;
    }
    Ok(ZeroLattice::finish(nu, entries, Vec::new()))
}

/// Zeros with index in `m_range` by complex Newton from McMahon seeds.
///
/// Indices whose iteration diverges, stalls, or strays more than π/2 from the
/// seed are listed in [`ZeroLattice::missing`].
pub fn complex_zeros<T: Real>(order: Complex<T>, m_range: std::ops::RangeInclusive<usize>) -> Result<ZeroLattice<T>> {
    let e = BesselEvaluator::new(order)?;
    if *m_range.start() == 0 {
        return Err(Error::Invalid("zero indices start at 1".into()));
    }
    let mut entries = Vec::new();
    let mut missing = Vec::new();
    for m in m_range {
        let seed = mcmahon_refined(order, m);
        let mut z = seed;
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let fz = e.eval(z);
            let dz = e.derivative(z);
            let step = fz / dz;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            z = z - step;
            if step.norm() <= T::epsilon() * T::lit(8.0) * z.norm() {
                converged = true;
                break;
            }
        }
        let residual = e.eval(z).norm();
        let accepted = converged
            && (z - seed).norm() <= T::FRAC_PI_2()
            && residual <= T::lit(1e-10).max(T::epsilon().sqrt() * T::lit(1e-2)) * (T::one() + e.envelope(z));
        if accepted {
            entries.push(ZeroEntry { index: m, value: z, residual });
        } else {
            missing.push(m);
        }
    }
    Ok(ZeroLattice::finish(order, entries, missing))
}

/// `f(ν) = a_{ν,1} / a_{ν,2}`, working window `ν ∈ (−1, 2]`.
pub fn zero_ratio_f<T: Real>(order: T) -> Result<T> {
    if is_half(re(order)) {
        return Ok(T::lit(0.5));
    }
    let lattice = real_zeros(order, 2)?;
    let v = lattice.real_values();
    Ok(v[0] / v[1])
}

/// Bisection on `ν` for `f(ν) = x` inside `bracket`.
pub fn find_order_with_ratio<T: Real>(x: T, bracket: (T, T)) -> Result<T> {
    let (mut lo, mut hi) = bracket;
    let g = |nu: T| zero_ratio_f(nu).map(|f| f - x);
    let mut g_lo = g(lo)?;
    let g_hi = g(hi)?;
    if g_lo == T::zero() {
        return Ok(lo);
    }
    if g_hi == T::zero() {
        return Ok(hi);
    }
    if (g_lo < T::zero()) == (g_hi < T::zero()) {
        return Err(Error::Bracket(format!(
            "f(ν) − {x} has no sign change on [{lo}, {hi}] (values {g_lo:e}, {g_hi:e})"
        )));
    }
    let target = T::lit(1e-10).max(T::epsilon() * T::lit(16.0));
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        let g_mid = g(mid)?;
        if g_mid.abs() <= target * T::lit(0.1) || hi - lo <= T::epsilon() * T::lit(4.0) {
            return Ok(mid);
        }
        if (g_mid < T::zero()) == (g_lo < T::zero()) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use std::f64::consts::PI;

    #[test]
    fn seed_values() {
        assert_eq!(mcmahon_seed(re(0.5), 5), re(5.0 * PI));
        let s = mcmahon_seed(re(0.0), 1).re;
        assert!((s - 0.75 * PI).abs() < 1e-15);
        assert!((s - 2.404_825_557_695_773).abs() < 0.05);
        let c = mcmahon_seed(Complex::new(1.0, 0.5), 10);
        assert!((c.im - PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn half_order_zeros_are_multiples_of_pi() {
        let z = real_zeros(0.5_f64, 100).unwrap();
        assert!(z.is_exact());
        for (k, v) in z.real_values().iter().enumerate() {
            assert!((v - (k + 1) as f64 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn integer_orders_match_bisection_oracle() {
        for n in [0, 1] {
            let expected = oracle::integer_order_zeros(n, 20);
            let got = real_zeros(n as f64, 20).unwrap().real_values();
            for (a, b) in got.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-10, "n={n}: {a} vs {b}");
            }
        }
        let z0 = real_zeros(0.0_f64, 2).unwrap().real_values();
        assert!((z0[0] - 2.404_825_557_695_773).abs() < 1e-12);
        assert!((z0[1] - 5.520_078_110_286_311).abs() < 1e-12);
        assert!((real_zeros(1.0_f64, 1).unwrap().real_values()[0] - 3.831_705_970_207_512).abs() < 1e-12);
    }

    #[test]
    fn zeros_are_simple_and_small() {
        for nu in [-0.5, 0.0, 0.3, 1.7, 3.0] {
            let z = real_zeros::<f64>(nu, 30).unwrap();
            let e = BesselEvaluator::real(nu).unwrap();
            for entry in z.entries() {
                let scale = e.envelope(entry.value);
                assert!(entry.residual <= 1e-12 * scale.max(1e-3), "ν={nu} m={}", entry.index);
                assert!(e.derivative(entry.value).norm() > 1e-6 * e.envelope(entry.value));
            }
        }
    }

    #[test]
    fn no_zero_skipped() {
        let nu = 0.3;
        let e = BesselEvaluator::real(nu).unwrap();
        let x_max = 60.0;
        let mut changes = 0;
        let h = PI / 8.0;
        let mut x = 0.0;
        while x + h <= x_max {
            if (e.eval_real(x).re < 0.0) != (e.eval_real(x + h).re < 0.0) {
                changes += 1;
            }
            x += h;
        }
        let z = real_zeros(nu, 25).unwrap();
        let counted = z.real_values().iter().filter(|&&v| v <= x_max - (x_max % h)).count();
        assert_eq!(changes, counted);
    }

    #[test]
    fn complex_route_agrees_with_real_route() {
        let real = real_zeros(1.0_f64, 20).unwrap();
        let cplx = complex_zeros(re(1.0), 3..=20).unwrap();
        assert!(cplx.missing().is_empty());
        for e in cplx.entries() {
            let r = real.zero(e.index).unwrap();
            assert!((e.value - r).norm() < 1e-10);
        }
    }

    #[test]
    fn complex_order_zeros_approach_horizontal_line() {
        let nu = Complex::new(1.0, 1.0);
        let z = complex_zeros(nu, 3..=40).unwrap();
        assert!(z.missing().is_empty(), "{:?}", z.missing());
        let a30 = z.zero(30).unwrap();
        assert!((a30.im - PI / 2.0).abs() < 0.05);
        for e in z.entries() {
            assert!(e.residual <= 1e-10);
        }
    }

    #[test]
    fn gaps_tend_to_pi() {
        let z = real_zeros(0.0_f64, 101).unwrap().real_values();
        assert!((z[100] - z[99] - PI).abs() < 1e-3);
    }

    #[test]
    fn mcmahon_error_decays_like_inverse_m() {
        let z = real_zeros(0.0_f64, 100).unwrap();
        let mut c: f64 = 0.0;
        for m in 10..=100 {
            c = c.max((z.zero(m).unwrap() - mcmahon_seed(re(0.0), m)).norm() * m as f64);
        }
        // leading error term is (μ−1)/(8β) ≈ 1/(8π m)
        assert!(c < 0.05, "{c}");
        let m = 100;
        assert!((z.zero(m).unwrap() - mcmahon_seed(re(0.0), m)).norm() <= c / m as f64 + 1e-15);
    }

    #[test]
    fn surrogate_tail_is_accurate() {
        let z = real_zeros(0.0_f64, 40).unwrap();
        let exact = oracle::integer_order_zeros(0, 60);
        for m in 41..=60 {
            let s = z.zero(m).unwrap().re;
            assert!((s - exact[m - 1]).abs() <= z.error_bound(m), "m={m}");
        }
    }

    #[test]
    fn ratio_function() {
        assert_eq!(zero_ratio_f(0.5_f64).unwrap(), 0.5);
        assert!((zero_ratio_f(0.5000001_f64).unwrap() - 0.5).abs() < 1e-6);
        let f0 = zero_ratio_f(0.0_f64).unwrap();
        assert!((f0 - 2.404_825_557_695_773 / 5.520_078_110_286_311).abs() < 1e-12);
        let nu = find_order_with_ratio(0.46_f64, (0.0, 0.5)).unwrap();
        assert!(nu > 0.0 && nu < 0.5);
        assert!((zero_ratio_f::<f64>(nu).unwrap() - 0.46).abs() <= 1e-10);
        let half = find_order_with_ratio(0.5_f64, (0.4, 0.6)).unwrap();
        assert!((half - 0.5).abs() < 1e-8);
        assert!(matches!(find_order_with_ratio(0.9, (0.0, 0.5)), Err(Error::Bracket(_))));
    }

    #[test]
    fn rejects_orders_outside_window() {
        assert!(real_zeros(-1.5_f64, 3).is_err());
        assert!(real_zeros(0.0_f64, 0).is_err());
    }
}
