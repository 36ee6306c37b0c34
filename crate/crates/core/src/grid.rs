//! Sampled functions on the periodic box `[0, L)^n`, `n ∈ {1, 2, 3}`.
//!
//! Values are stored row-major with axis 0 (the `x₁` direction) slowest. The
//! discrete frequencies are `ξ = 2πk/L` with `k` in `[−P/2, P/2)` per axis.

use std::fmt::Write as _;

use num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::scalar::{re, sup_norm, Real};

pub const MIN_POINTS: usize = 8;

/// Element type recorded in grid files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dtype {
    F64,
    C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    dim: usize,
    points: usize,
    length: T,
    values: Vec<Complex<T>>,
}

/// `Ω_n = 2π^{n/2} / Γ(n/2)`, the area of the unit sphere in `ℝⁿ`.
pub fn sphere_area<T: Real>(dim: usize) -> T {
    let half = T::from_usize_lossy(dim) / T::lit(2.0);
    let g = gamma(re(half)).expect("n/2 is not a pole").re;
    T::lit(2.0) * T::PI().powf(half) / g
}

fn check_shape(dim: usize, points: usize) -> Result<()> {
    if !(1..=3).contains(&dim) {
        return Err(Error::Invalid(format!("dimension must be 1, 2 or 3, got {dim}")));
    }
    if points < MIN_POINTS || !points.is_power_of_two() {
        return Err(Error::Invalid(format!("points per axis must be a power of two >= {MIN_POINTS}, got {points}")));
    }
    Ok(())
}

/// Signed frequency index of storage position `i` on an axis of `p` points.
pub fn signed_index(i: usize, p: usize) -> i64 {
    if i < p / 2 {
        i as i64
    } else {
        i as i64 - p as i64
    }
}

impl<T: Real> GridFunction<T> {
    pub fn zeros(dim: usize, points: usize, length: T) -> Result<Self> {
        check_shape(dim, points)?;
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::Invalid("box length must be positive".into()));
        }
        Ok(Self { dim, points, length, values: vec![Complex::new(T::zero(), T::zero()); points.pow(dim as u32)] })
    }

    pub fn from_values(dim: usize, points: usize, length: T, values: Vec<Complex<T>>) -> Result<Self> {
        let mut g = Self::zeros(dim, points, length)?;
        if values.len() != g.values.len() {
            return Err(Error::Format(format!("expected {} values, got {}", g.values.len(), values.len())));
        }
        g.values = values;
        Ok(g)
    }

    /// Samples `f` at the grid points `x = (i₀, i₁, …)·L/P`.
    pub fn from_fn(dim: usize, points: usize, length: T, mut f: impl FnMut(&[T]) -> Complex<T>) -> Result<Self> {
        let mut g = Self::zeros(dim, points, length)?;
        let h = length / T::from_usize_lossy(points);
        let mut x = vec![T::zero(); dim];
        for (idx, v) in g.values.iter_mut().enumerate() {
            let mut rest = idx;
            for d in (0..dim).rev() {
                x[d] = T::from_usize_lossy(rest % points) * h;
                rest /= points;
            }
            *v = f(&x);
        }
        Ok(g)
    }

    /// `cos(λ x₁)`.
    pub fn cosine(dim: usize, points: usize, length: T, lambda: T) -> Result<Self> {
        Self::from_fn(dim, points, length, |x| re((lambda * x[0]).cos()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn spacing(&self) -> T {
        self.length / T::from_usize_lossy(self.points)
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == T::zero())
    }

    pub fn sup_norm(&self) -> T {
        sup_norm(&self.values)
    }

    pub fn conformable(&self, other: &Self) -> bool {
        self.dim == other.dim && self.points == other.points && self.length == other.length
    }

    fn require_conformable(&self, other: &Self) -> Result<()> {
        if self.conformable(other) {
            Ok(())
        } else {
            Err(Error::Invalid("grids differ in dimension, size or box length".into()))
        }
    }

    /// `‖self − other‖_∞`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.require_conformable(other)?;
        Ok(self.values.iter().zip(&other.values).fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_conformable(other)?;
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(), ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_conformable(other)?;
        Ok(Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(), ..self.clone() })
    }

    /// Value at the grid point with multi-index `idx`.
    pub fn at(&self, idx: &[usize]) -> Complex<T> {
        self.values[self.flat(idx)]
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.points + i % self.points)
    }

    /// Periodic shift by whole grid steps: `out(x) = self(x − shift·h)`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        let p = self.points as i64;
        let mut out = self.clone();
        let mut idx = vec![0usize; self.dim];
        for (k, v) in out.values.iter_mut().enumerate() {
            let mut rest = k;
            for d in (0..self.dim).rev() {
                let i = (rest % self.points) as i64;
                idx[d] = (i - shift.get(d).copied().unwrap_or(0)).rem_euclid(p) as usize;
                rest /= self.points;
            }
            *v = self.values[self.flat(&idx)];
        }
        out
    }

    /// Signed frequency multi-index of flat position `k`.
    pub fn frequency_index(&self, k: usize) -> Vec<i64> {
        let mut idx = vec![0i64; self.dim];
        let mut rest = k;
        for d in (0..self.dim).rev() {
            idx[d] = signed_index(rest % self.points, self.points);
            rest /= self.points;
        }
        idx
    }

    /// `|k|²` of flat position `k`, in integer units.
    pub fn frequency_norm_sq(&self, k: usize) -> u64 {
        self.frequency_index(k).iter().map(|&i| (i * i) as u64).sum()
    }

    /// `2π/L`, the frequency lattice spacing.
    pub fn frequency_unit(&self) -> T {
        T::TAU() / self.length
    }

    /// Forward transform (unnormalized).
    pub fn spectrum(&self) -> Vec<Complex<T>> {
        let mut data = self.values.clone();
        fft_nd(&mut data, self.dim, self.points, FftDirection::Forward);
        data
    }

    /// Inverse of [`GridFunction::spectrum`], including the `1/Pⁿ` factor.
    pub fn from_spectrum(&self, mut spectrum: Vec<Complex<T>>) -> Self {
        fft_nd(&mut spectrum, self.dim, self.points, FftDirection::Inverse);
        let norm = T::one() / T::from_usize_lossy(spectrum.len());
        for v in &mut spectrum {
            *v = *v * norm;
        }
        Self { values: spectrum, ..self.clone() }
    }

    /// Applies a radial Fourier multiplier `m(|ξ|)`; `m` is called once per
    /// distinct `|k|²`.
    pub fn apply_radial(&self, mut m: impl FnMut(T) -> Result<Complex<T>>) -> Result<Self> {
        let mut spec = self.spectrum();
        let unit = self.frequency_unit();
        let mut cache = std::collections::HashMap::new();
        for (k, v) in spec.iter_mut().enumerate() {
            let key = self.frequency_norm_sq(k);
            let factor = match cache.get(&key) {
                Some(f) => *f,
                None => {
                    let f = m(unit * T::from_f64(key as f64).expect("finite").sqrt())?;
                    cache.insert(key, f);
                    f
                }
            };
            *v = *v * factor;
        }
        Ok(self.from_spectrum(spec))
    }

    /// Spectral Laplacian.
    pub fn laplacian(&self) -> Self {
        self.apply_radial(|xi| Ok(re(-xi * xi))).expect("infallible multiplier")
    }

    /// Largest `|k|_∞` carrying a coefficient above `tol · max|coefficient|`.
    pub fn bandwidth(&self, tol: T) -> i64 {
        let spec = self.spectrum();
        let top = sup_norm(&spec);
        spec.iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > tol * top)
            .map(|(k, _)| self.frequency_index(k).iter().map(|i| i.abs()).max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Nonzero Fourier modes, for evaluation off the grid.
    pub fn interpolant(&self) -> Interpolant<T> {
        let spec = self.spectrum();
        let top = sup_norm(&spec);
        let n = T::from_usize_lossy(spec.len());
        let unit = self.frequency_unit();
        // drop transform roundoff
        let cutoff = top * T::lit(1e-12);
        let modes = spec
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > cutoff)
            .map(|(k, c)| {
                let xi = self.frequency_index(k).iter().map(|&i| T::from_i64(i).expect("small") * unit).collect();
                (xi, c / n)
            })
            .collect();
        Interpolant { modes }
    }

    pub fn header(&self) -> GridHeader {
        GridHeader {
            n: self.dim,
            p: self.points,
            l: self.length.as_f64(),
            dtype: if self.is_real() { Dtype::F64 } else { Dtype::C64 },
            layout: "row-major".into(),
        }
    }

    /// JSON header line followed by one CSV record per value, with 17
    /// significant digits.
    pub fn to_text(&self) -> String {
        let header = self.header();
        let mut out = serde_json::to_string(&header).expect("header serializes");
        out.push('\n');
        for v in &self.values {
            match header.dtype {
                Dtype::F64 => writeln!(out, "{:.16e}", v.re.as_f64()),
                Dtype::C64 => writeln!(out, "{:.16e},{:.16e}", v.re.as_f64(), v.im.as_f64()),
            }
            .expect("write to string");
        }
        out
    }

    /// Reads [`GridFunction::to_text`] output or a self-describing JSON
    /// object `{n, P, L, dtype, values}`.
    pub fn from_text(text: &str) -> Result<Self> {
        let trimmed = text.trim_start();
        if let Ok(doc) = serde_json::from_str::<GridDocument>(trimmed) {
            let values = doc.values.iter().map(|p| Complex::new(T::lit(p.0), T::lit(p.1))).collect();
            return Self::from_values(doc.header.n, doc.header.p, T::lit(doc.header.l), values);
        }
        let mut lines = trimmed.lines();
        let head = lines.next().ok_or_else(|| Error::Format("empty grid file".into()))?;
        let header: GridHeader =
            serde_json::from_str(head).map_err(|e| Error::Format(format!("bad grid header: {e}")))?;
        if header.layout != "row-major" {
            return Err(Error::Format(format!("unsupported layout {}", header.layout)));
        }
        let mut values = Vec::new();
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let mut parts = line.split(',').map(str::trim);
            let parse = |s: Option<&str>| -> Result<f64> {
                s.ok_or_else(|| Error::Format(format!("line {}: missing field", i + 2)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Format(format!("line {}: {e}", i + 2)))
            };
            let re_part = parse(parts.next())?;
            let im_part = match header.dtype {
                Dtype::F64 => 0.0,
                Dtype::C64 => parse(parts.next())?,
            };
            if parts.next().is_some() {
                return Err(Error::Format(format!("line {}: too many fields", i + 2)));
            }
            values.push(Complex::new(T::lit(re_part), T::lit(im_part)));
        }
        Self::from_values(header.n, header.p, T::lit(header.l), values)
    }

    /// Self-describing JSON, for small grids.
    pub fn to_json(&self) -> String {
        let doc = GridDocument {
            header: self.header(),
            values: self.values.iter().map(|v| (v.re.as_f64(), v.im.as_f64())).collect(),
        };
        serde_json::to_string(&doc).expect("grid serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridHeader {
    pub n: usize,
    #[serde(rename = "P")]
    pub p: usize,
    #[serde(rename = "L")]
    pub l: f64,
    pub dtype: Dtype,
    #[serde(default = "row_major")]
    pub layout: String,
}

fn row_major() -> String {
    "row-major".into()
}

#[derive(Debug, Serialize, Deserialize)]
struct GridDocument {
    #[serde(flatten)]
    header: GridHeader,
    values: Vec<(f64, f64)>,
}

/// Trigonometric interpolant `Σ c_k e^{iξ_k·x}` of a grid function.
#[derive(Debug, Clone)]
pub struct Interpolant<T> {
    modes: Vec<(Vec<T>, Complex<T>)>,
}

impl<T: Real> Interpolant<T> {
    pub fn eval(&self, x: &[T]) -> Complex<T> {
        self.modes.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (xi, c)| {
            let phase = xi.iter().zip(x).fold(T::zero(), |s, (a, b)| s + *a * *b);
            acc + c * Complex::new(phase.cos(), phase.sin())
        })
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Largest `|ξ|` among the modes.
    pub fn max_frequency(&self) -> T {
        self.modes
            .iter()
            .map(|(xi, _)| xi.iter().fold(T::zero(), |s, v| s + *v * *v).sqrt())
            .fold(T::zero(), T::max)
    }
}

fn fft_nd<T: Real>(data: &mut [Complex<T>], dim: usize, p: usize, direction: FftDirection) {
    let mut planner = FftPlanner::<T>::new();
    let fft = planner.plan_fft(p, direction);
    let mut line = vec![Complex::new(T::zero(), T::zero()); p];
    let mut scratch = vec![Complex::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()];
    for axis in 0..dim {
        let stride = p.pow((dim - 1 - axis) as u32);
        let block = stride * p;
        for start in 0..data.len() / p {
            let outer = start / stride;
            let inner = start % stride;
            let base = outer * block + inner;
            for (j, slot) in line.iter_mut().enumerate() {
                *slot = data[base + j * stride];
            }
            fft.process_with_scratch(&mut line, &mut scratch);
            for (j, v) in line.iter().enumerate() {
                data[base + j * stride] = *v;
            }
        }
    }
}
