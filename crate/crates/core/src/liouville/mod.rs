//! Ratios of zeros, θ-chains, irrationality quality and the covering-measure
//! experiment, over a pluggable increasing lattice `a_1 < a_2 < …`.
//!
//! The half-order lattice `a_m = mπ` is arithmetic, so its ratios are the
//! positive rationals and the chain runs in exact big-rational arithmetic.
//! Other orders use computed zeros up to a cutoff and McMahon surrogates
//! beyond, with an attached error bound.

mod measure;
mod precise;
mod quality;
mod theta;

pub use measure::{measure_cover, MeasureReport};
pub use quality::{
    is_jnu_rational, liouville_constant, liouville_quality, liouville_quality_exact, RatioApproximation,
};
pub use theta::{
    fit_theta_constant, theta, theta_chain, theta_exact, validate_cutoff, BinarySequence, ChainOptions, ThetaChain,
    DEFAULT_BUDGET_BITS,
};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::zeros::{real_zeros, ZeroLattice};

/// Default number of zeros computed before switching to surrogates.
pub const DEFAULT_COMPUTED_ZEROS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    /// `a_m = scale · m`
    Arithmetic { scale: f64, scale_upper: BigRational },
    Zeros { order: f64, zeros: ZeroLattice<f64> },
    Set(Vec<f64>),
}

/// An increasing sequence of positive reals indexed from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    kind: Kind,
}

impl Lattice {
    /// `a_m = mπ`, the zeros of `j_{1/2}`.
    pub fn half_order() -> Self {
        Self {
            kind: Kind::Arithmetic {
                scale: std::f64::consts::PI,
                scale_upper: BigRational::new(BigInt::from(355), BigInt::from(113)),
            },
        }
    }

    /// `a_m = m`.
    pub fn integers() -> Self {
        Self {
            kind: Kind::Arithmetic { scale: 1.0, scale_upper: BigRational::from_integer(BigInt::from(1)) },
        }
    }

    /// Positive zeros of `j_ν` for real `ν > −1`; `ν = 1/2` gives [`Lattice::half_order`].
    pub fn bessel(order: f64, computed: usize) -> Result<Self> {
        if order == 0.5 {
            return Ok(Self::half_order());
        }
        let zeros = real_zeros(order, computed.max(2))?;
        Ok(Self { kind: Kind::Zeros { order, zeros } })
    }

    pub fn is_arithmetic(&self) -> bool {
        matches!(self.kind, Kind::Arithmetic { .. })
    }

    /// Bessel order, if this is a zero lattice.
    pub fn order(&self) -> Option<f64> {
        match &self.kind {
            Kind::Arithmetic { scale, .. } if *scale == std::f64::consts::PI => Some(0.5),
            Kind::Zeros { order, .. } => Some(*order),
            _ => None,
        }
    }

    /// Largest valid index, `None` for unbounded lattices.
    pub fn max_index(&self) -> Option<usize> {
        match &self.kind {
            Kind::Set(v) => Some(v.len()),
            _ => None,
        }
    }

    /// `a_m`, or `None` outside the lattice.
    pub fn a(&self, m: usize) -> Option<f64> {
        if m == 0 {
            return None;
        }
        match &self.kind {
            Kind::Arithmetic { scale, .. } => Some(scale * m as f64),
            Kind::Zeros { zeros, .. } => zeros.zero(m).map(|z| z.re),
            Kind::Set(v) => v.get(m - 1).copied(),
        }
    }

    /// `a_k / a_n`; exactly `k / n` (rounded once) on arithmetic lattices.
    pub fn ratio(&self, k: usize, n: usize) -> Option<f64> {
        match &self.kind {
            Kind::Arithmetic { .. } if k > 0 && n > 0 => Some(k as f64 / n as f64),
            _ => Some(self.a(k)? / self.a(n)?),
        }
    }

    /// Absolute error bound on `a(m)`.
    pub fn error_bound(&self, m: usize) -> f64 {
        match &self.kind {
            Kind::Arithmetic { .. } | Kind::Set(_) => 0.0,
            Kind::Zeros { zeros, .. } => {
                let computed = zeros.error_bound(m);
                if computed > 0.0 {
                    computed
                } else {
                    // Newton-converged f64 zero
                    8.0 * f64::EPSILON * self.a(m).unwrap_or(0.0)
                }
            }
        }
    }

    /// Smallest `m` with `a_m >= target`.
    pub fn first_index_at_least(&self, target: f64) -> Option<usize> {
        if let Kind::Arithmetic { scale, .. } = &self.kind {
            let m = (target / scale).ceil().max(1.0);
            if m >= usize::MAX as f64 {
                return None;
            }
            let mut m = m as usize;
            // correct the float estimate in both directions
            while m > 1 && scale * ((m - 1) as f64) >= target {
                m -= 1;
            }
            while scale * (m as f64) < target {
                m += 1;
            }
            return Some(m);
        }
        let a1 = self.a(1)?;
        if a1 >= target {
            return Some(1);
        }
        let mut hi = 2usize;
        loop {
            match self.a(hi) {
                Some(v) if v >= target => break,
                Some(_) => hi = hi.checked_mul(2)?,
                None => {
                    let last = self.max_index()?;
                    if self.a(last)? < target {
                        return None;
                    }
                    hi = last;
                    break;
                }
            }
        }
        let mut lo = 1usize; // a(lo) < target <= a(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.a(mid)? >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }

    pub(crate) fn scale_upper(&self) -> Option<&BigRational> {
        match &self.kind {
            Kind::Arithmetic { scale_upper, .. } => Some(scale_upper),
            _ => None,
        }
    }

    pub(crate) fn zero_lattice(&self) -> Option<(f64, &ZeroLattice<f64>)> {
        match &self.kind {
            Kind::Zeros { order, zeros } => Some((*order, zeros)),
            _ => None,
        }
    }
}

/// Decimal expansion of `r` truncated toward zero after `digits` places.
pub fn decimal(r: &BigRational, digits: usize) -> String {
    crate::fixed::decimal_string(r, digits)
}

/// `log₁₀ |r|` for nonzero `r`, without overflow for huge numerators or
/// denominators.
pub fn log10_abs(r: &BigRational) -> f64 {
    crate::fixed::ln_abs(r) / std::f64::consts::LN_10
}

/// Wraps an arbitrary increasing, separated set of positive reals.
pub fn generalized_lattice(values: &[f64]) -> Result<Lattice> {
    if values.is_empty() {
        return Err(Error::Domain("lattice needs at least one value".into()));
    }
    if values.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(Error::Domain("lattice values must be finite and positive".into()));
    }
    for w in values.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::Domain(format!(
                "lattice values must be strictly increasing and separated; found {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(Lattice { kind: Kind::Set(values.to_vec()) })
}

/// McMahon surrogate in `f64` for an order.
#[cfg(test)]
fn surrogate_f64(order: f64, m: usize) -> f64 {
    crate::zeros::mcmahon_refined(crate::scalar::re(order), m).re
}
