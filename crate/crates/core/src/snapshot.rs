//! The two-snapshot problem: recover `f` from `g = f ∗ m_α^s` and
//! `h = f ∗ m_α^r`.
//!
//! On the periodic grid both convolutions are Fourier multipliers, so the
//! inversion is per frequency. Each frequency is divided by whichever of
//! `Γ j_ν(s|ξ|)` and `Γ j_ν(r|ξ|)` is larger in modulus; frequencies where both
//! fall below a floor are flagged and zero-filled.

use std::collections::HashMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bessel::BesselEvaluator;
use crate::epd::{propagate_with, EpdMultiplier};
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::liouville::{is_jnu_rational, Lattice};
use crate::scalar::{re, Real};

/// Compatibility tolerance used by [`reconstruct`] unless overridden.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Default absolute floor, in units of `|Γ(α + n/2)|`.
pub const DEFAULT_FLOOR: f64 = 1e-10;
/// Fraction of the scanned lower bound used as a floor.
pub const SCAN_FLOOR_FRACTION: f64 = 0.25;
/// Default exponent candidates for [`small_denominator_scan`].
pub const DEFAULT_CANDIDATES: [f64; 7] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0];

/// Two snapshots of one EPD solution, `g` at time `s` and `h` at time `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotProblem<T> {
    g: GridFunction<T>,
    h: GridFunction<T>,
    r: T,
    s: T,
    multiplier: EpdMultiplier<T>,
}

impl<T: Real> SnapshotProblem<T> {
    pub fn new(g: GridFunction<T>, h: GridFunction<T>, r: T, s: T, alpha: Complex<T>) -> Result<Self> {
        if !g.conformable(&h) {
            return Err(Error::Invalid("snapshots live on different grids".into()));
        }
        if !(r > T::zero()) || !(s > T::zero()) || !r.is_finite() || !s.is_finite() {
            return Err(Error::Invalid(format!("snapshot times must be positive, got r = {r}, s = {s}")));
        }
        if r == s {
            return Err(Error::Invalid("snapshot times must differ".into()));
        }
        let multiplier = EpdMultiplier::new(alpha, g.dim())?;
        Ok(Self { g, h, r, s, multiplier })
    }

    /// Snapshot at time `s`.
    pub fn g(&self) -> &GridFunction<T> {
        &self.g
    }

    /// Snapshot at time `r`.
    pub fn h(&self) -> &GridFunction<T> {
        &self.h
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn alpha(&self) -> Complex<T> {
        self.multiplier.alpha()
    }

    pub fn multiplier(&self) -> &EpdMultiplier<T> {
        &self.multiplier
    }
}

/// `g = f ∗ m_α^s`, `h = f ∗ m_α^r`.
pub fn make_problem<T: Real>(f: &GridFunction<T>, r: T, s: T, alpha: Complex<T>) -> Result<SnapshotProblem<T>> {
    let m = EpdMultiplier::new(alpha, f.dim())?;
    let g = propagate_with(f, s, &m)?;
    let h = propagate_with(f, r, &m)?;
    SnapshotProblem::new(g, h, r, s, alpha)
}

/// `‖g ∗ m^r − h ∗ m^s‖_∞ / max(‖g‖_∞, ‖h‖_∞)`, or 0 when both vanish.
pub fn compatibility_residual<T: Real>(p: &SnapshotProblem<T>) -> Result<T> {
    let left = propagate_with(&p.g, p.r, &p.multiplier)?;
    let right = propagate_with(&p.h, p.s, &p.multiplier)?;
    let scale = p.g.sup_norm().max(p.h.sup_norm()).max(T::min_positive_value());
    Ok(left.max_abs_diff(&right)? / scale)
}

/// Lower threshold on `max(|d_s|, |d_r|)` below which a frequency is flagged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloorPolicy {
    /// Absolute floor in units of `|Γ(α + n/2)|`.
    pub absolute: f64,
    /// `(C, N)` from [`small_denominator_scan`]; adds the floor
    /// `SCAN_FLOOR_FRACTION · |Γ| · C (1 + |ξ|)^{−N}`.
    pub scan: Option<(f64, f64)>,
}

impl Default for FloorPolicy {
    fn default() -> Self {
        Self { absolute: DEFAULT_FLOOR, scan: None }
    }
}

impl FloorPolicy {
    pub fn with_scan(c: f64, n: f64) -> Self {
        Self { scan: Some((c, n)), ..Self::default() }
    }

    /// Floor at frequency `|ξ|` for a multiplier with `|Γ| = gamma_abs`.
    pub fn floor(&self, gamma_abs: f64, xi: f64) -> f64 {
        let scanned = self.scan.map_or(0.0, |(c, n)| SCAN_FLOOR_FRACTION * c * (1.0 + xi).powf(-n));
        gamma_abs * self.absolute.max(scanned)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channel {
    /// Divided out of `g` (time `s`).
    S,
    /// Divided out of `h` (time `r`).
    R,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionReport<T> {
    pub f: GridFunction<T>,
    /// Channel used at each storage position of the spectrum.
    pub channels: Vec<Channel>,
    /// `|Γ j_ν(s|ξ|)|` per storage position.
    pub denominator_s: Vec<T>,
    /// `|Γ j_ν(r|ξ|)|` per storage position.
    pub denominator_r: Vec<T>,
    /// Signed frequency indices of the zero-filled frequencies.
    pub flagged: Vec<Vec<i64>>,
    /// `‖f ∗ m^s − g‖_∞`.
    pub residual_s: T,
    /// `‖f ∗ m^r − h‖_∞`.
    pub residual_r: T,
    pub compatibility: T,
    pub floor: FloorPolicy,
}

impl<T: Real> ReconstructionReport<T> {
    /// Smallest `max(|d_s|, |d_r|)` over the grid.
    pub fn min_denominator(&self) -> T {
        self.denominator_s
            .iter()
            .zip(&self.denominator_r)
            .fold(T::infinity(), |m, (a, b)| m.min(a.max(*b)))
    }
}

/// Per-frequency deconvolution; rejects problems whose compatibility
/// residual exceeds `tolerance`.
pub fn reconstruct<T: Real>(p: &SnapshotProblem<T>, policy: FloorPolicy, tolerance: T) -> Result<ReconstructionReport<T>> {
    let compatibility = compatibility_residual(p)?;
    if !(compatibility <= tolerance) {
        return Err(Error::Incompatible { residual: compatibility.as_f64(), tolerance: tolerance.as_f64() });
    }
    let m = &p.multiplier;
    let gamma_abs = m.gamma_factor().norm().as_f64();
    let g_hat = p.g.spectrum();
    let h_hat = p.h.spectrum();
    let unit = p.g.frequency_unit();
    let mut cache: HashMap<u64, (Complex<T>, Complex<T>, f64)> = HashMap::new();
    let len = g_hat.len();
    let mut f_hat = vec![Complex::new(T::zero(), T::zero()); len];
    let mut channels = Vec::with_capacity(len);
    let mut denominator_s = Vec::with_capacity(len);
    let mut denominator_r = Vec::with_capacity(len);
    let mut flagged = Vec::new();
    for k in 0..len {
        let key = p.g.frequency_norm_sq(k);
        let (ds, dr, floor) = *cache.entry(key).or_insert_with(|| {
            let xi = unit * T::from_f64(key as f64).expect("finite").sqrt();
            (m.value(p.s, xi), m.value(p.r, xi), policy.floor(gamma_abs, xi.as_f64()))
        });
        let (a, b) = (ds.norm(), dr.norm());
        denominator_s.push(a);
        denominator_r.push(b);
        let channel = if a >= b { Channel::S } else { Channel::R };
        channels.push(channel);
        if a.max(b).as_f64() < floor {
            flagged.push(p.g.frequency_index(k));
            continue;
        }
        f_hat[k] = match channel {
            Channel::S => g_hat[k] / ds,
            Channel::R => h_hat[k] / dr,
        };
    }
    let f = p.g.from_spectrum(f_hat);
    let residual_s = propagate_with(&f, p.s, m)?.max_abs_diff(&p.g)?;
    let residual_r = propagate_with(&f, p.r, m)?.max_abs_diff(&p.h)?;
    Ok(ReconstructionReport {
        f,
        channels,
        denominator_s,
        denominator_r,
        flagged,
        residual_s,
        residual_r,
        compatibility,
        floor: policy,
    })
}

/// Lattice frequencies of a grid at which both `|Γ j_ν(r|ξ|)|` and
/// `|Γ j_ν(s|ξ|)|` are at most `tol`.
pub fn joint_small_frequencies<T: Real>(
    grid: &GridFunction<T>,
    r: T,
    s: T,
    alpha: Complex<T>,
    tol: T,
) -> Result<Vec<Vec<i64>>> {
    let m = EpdMultiplier::new(alpha, grid.dim())?;
    let unit = grid.frequency_unit();
    let mut small: HashMap<u64, bool> = HashMap::new();
    let mut out = Vec::new();
    for k in 0..grid.len() {
        let key = grid.frequency_norm_sq(k);
        let hit = *small.entry(key).or_insert_with(|| {
            let xi = unit * T::from_f64(key as f64).expect("finite").sqrt();
            m.value(r, xi).norm() <= tol && m.value(s, xi).norm() <= tol
        });
        if hit {
            out.push(grid.frequency_index(k));
        }
    }
    Ok(out)
}

/// Constant `C_N` of the bound `|j_ν(rz)| + |j_ν(sz)| ≥ C_N (1 + z)^{−N}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateFit {
    pub exponent: f64,
    /// Over `[0, z_max]`.
    pub c_full: f64,
    /// Over `[0, z_max/2]`.
    pub c_half: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub r: f64,
    pub s: f64,
    pub order: (f64, f64),
    pub z_max: f64,
    pub step: f64,
    pub candidates: Vec<CandidateFit>,
    /// Smallest candidate with `C > 1e−9` that keeps at least 80% of its
    /// half-range value over the full range.
    pub fitted_n: Option<f64>,
    /// `C` of the fitted exponent, or of the largest candidate if none fits.
    pub fitted_c: f64,
    /// Location of the smallest weighted sum.
    pub argmin_z: f64,
    /// `min |j_ν(rz)| + |j_ν(sz)|` over the range.
    pub min_sum: f64,
    /// `min (|j_ν(rz)| + |j_ν(sz)|) / (E(rz) + E(sz))` for `z ≥ π / min(r, s)`,
    /// with `E` the Hankel envelope of `|j_ν|`.
    pub min_normalized: f64,
}

const FIT_FLOOR: f64 = 1e-9;
const FIT_STABILITY: f64 = 0.8;

/// Samples `|j_ν(rz)| + |j_ν(sz)|` on `[0, z_max]` with step
/// `π / (32 max(r, s))`, refines every local minimum by golden section and
/// fits the polynomial lower bound for each exponent candidate.
pub fn small_denominator_scan(r: f64, s: f64, nu: Complex<f64>, z_max: f64, candidates: &[f64]) -> Result<ScanReport> {
    if !(r > 0.0) || !(s > 0.0) {
        return Err(Error::Domain(format!("scan needs r, s > 0, got {r}, {s}")));
    }
    let reach = 10.0 * std::f64::consts::PI / r.min(s);
    if !(z_max >= reach) {
        return Err(Error::Domain(format!("z_max must be at least 10π/min(r, s) = {reach}")));
    }
    if candidates.is_empty() || candidates.iter().any(|n| !(*n >= 0.0)) {
        return Err(Error::Domain("exponent candidates must be a non-empty list of N ≥ 0".into()));
    }
    let ev = BesselEvaluator::new(nu)?;
    let sum = |z: f64| ev.eval(re(r * z)).norm() + ev.eval(re(s * z)).norm();
    let step = std::f64::consts::PI / (32.0 * r.max(s));
    let count = (z_max / step).ceil() as usize;
    let grid: Vec<(f64, f64)> = (0..=count)
        .map(|i| (i as f64 * step).min(z_max))
        .map(|z| (z, sum(z)))
        .collect();
    let mut samples = grid.clone();
    for w in grid.windows(3) {
        if w[1].1 <= w[0].1 && w[1].1 <= w[2].1 {
            samples.push(golden_min(&sum, w[0].0, w[2].0));
        }
    }
    let fits: Vec<CandidateFit> = candidates
        .iter()
        .map(|&n| {
            let weighted = |&(z, v): &(f64, f64)| v * (1.0 + z).powf(n);
            let c_full = samples.iter().map(weighted).fold(f64::INFINITY, f64::min);
            let c_half =
                samples.iter().filter(|p| p.0 <= z_max / 2.0).map(weighted).fold(f64::INFINITY, f64::min);
            CandidateFit { exponent: n, c_full, c_half }
        })
        .collect();
    let chosen = fits.iter().find(|f| f.c_full > FIT_FLOOR && f.c_full >= FIT_STABILITY * f.c_half);
    let fitted_n = chosen.map(|f| f.exponent);
    let fitted_c = chosen.map_or_else(|| fits.last().map(|f| f.c_full).unwrap_or(0.0), |f| f.c_full);
    let weight = fitted_n.unwrap_or(0.0);
    let (argmin_z, _) = samples
        .iter()
        .map(|&(z, v)| (z, v * (1.0 + z).powf(weight)))
        .fold((0.0, f64::INFINITY), |best, p| if p.1 < best.1 { p } else { best });
    let min_sum = samples.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let start = std::f64::consts::PI / r.min(s);
    let min_normalized = samples
        .iter()
        .filter(|p| p.0 >= start)
        .map(|&(z, v)| v / (ev.envelope(re(r * z)) + ev.envelope(re(s * z))))
        .fold(f64::INFINITY, f64::min);
    Ok(ScanReport {
        r,
        s,
        order: (nu.re, nu.im),
        z_max,
        step,
        candidates: fits,
        fitted_n,
        fitted_c,
        argmin_z,
        min_sum,
        min_normalized,
    })
}

fn golden_min(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// A function annihilated by both propagations.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelWitness {
    /// `cos(z x₁)` on the box `[0, 2π/z)^n`.
    pub f: GridFunction<f64>,
    pub frequency: f64,
    /// `(k, n)` with `r/s = a_k/a_n`.
    pub indices: (usize, usize),
    /// `‖f ∗ m^r‖_∞`.
    pub norm_r: f64,
    /// `‖f ∗ m^s‖_∞`.
    pub norm_s: f64,
}

/// Searches the zero lattice of `j_ν`, `ν = α + (n−2)/2`, for `r/s = a_k/a_n`
/// with `n ≤ index_bound`; on success returns `cos(z x₁)` with `z = a_k/r`
/// sampled on a box whose first lattice frequency is `z`.
pub fn kernel_witness(
    r: f64,
    s: f64,
    lattice: &Lattice,
    alpha: Complex<f64>,
    dim: usize,
    points: usize,
    index_bound: usize,
) -> Result<Option<KernelWitness>> {
    if !(r > 0.0) || !(s > 0.0) {
        return Err(Error::Domain(format!("witness needs r, s > 0, got {r}, {s}")));
    }
    let m = EpdMultiplier::new(alpha, dim)?;
    let nu = m.order();
    if nu.im != 0.0 {
        // no real zeros
        return Ok(None);
    }
    if let Some(order) = lattice.order() {
        if (order - nu.re).abs() > 1e-12 {
            return Err(Error::Invalid(format!("lattice has order {order} but α, n give ν = {}", nu.re)));
        }
    }
    let Some((k, n)) = is_jnu_rational(r / s, lattice, index_bound, 1e-12 * (r / s).max(1.0)) else {
        return Ok(None);
    };
    let z = lattice.a(k).expect("found index") / r;
    let length = std::f64::consts::TAU / z;
    let f = GridFunction::cosine(dim, points, length, z)?;
    let norm_r = propagate_with(&f, r, &m)?.sup_norm();
    let norm_s = propagate_with(&f, s, &m)?.sup_norm();
    Ok(Some(KernelWitness { f, frequency: z, indices: (k, n), norm_r, norm_s }))
}

/// `‖g ∗ Ψ^r − h ∗ Ψ^s‖_∞` with `Ψ̂^t(ξ) = Γ j_ν(t|ξ|) / (|ξ|² − ζ²)`,
/// `ζ = a/r = b/s`, and the removable value `Γ t j_ν′(tζ) / (2ζ)` at `|ξ| = ζ`.
pub fn strong_compatibility_residual<T: Real>(p: &SnapshotProblem<T>, a: T, b: T) -> Result<T> {
    let m = &p.multiplier;
    let ev = m.evaluator();
    let gamma = m.gamma_factor();
    for (name, z) in [("a", a), ("b", b)] {
        let v = ev.eval(re(z)).norm();
        if !(v <= T::lit(1e-8)) {
            return Err(Error::Domain(format!("{name} = {z} is not a zero of j_ν (|j_ν| = {v:e})")));
        }
    }
    let zeta = a / p.r;
    if (zeta - b / p.s).abs() > T::lit(1e-10) * zeta.abs() {
        return Err(Error::Domain(format!("r/s = {} differs from a/b = {}", p.r / p.s, a / b)));
    }
    let psi = |t: T| {
        move |xi: T| -> Result<Complex<T>> {
            if (xi - zeta).abs() <= T::lit(1e-8) * zeta.abs() {
                return Ok(gamma * ev.derivative(re(t * zeta)) * t / (zeta * T::lit(2.0)));
            }
            Ok(ev.eval_scaled(re(t * xi)) / (xi * xi - zeta * zeta))
        }
    };
    let left = p.g.apply_radial(psi(p.r))?;
    let right = p.h.apply_radial(psi(p.s))?;
    left.max_abs_diff(&right)
}
