//! Approximation of a target by lattice ratios `a_k / a_n`.
//!
//! The quality exponent of a witness is `−ln|x − a_k/a_n| / ln a_n`, the real
//! number `q` with `|x − a_k/a_n| = a_n^{−q}`.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Lattice;
use crate::error::{Error, Result};
use crate::fixed::{ln_abs, ln_biguint};

/// Best ratio found for a target.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioApproximation {
    pub target: f64,
    pub numerator_index: BigUint,
    pub denominator_index: BigUint,
    /// `|x − a_k/a_n|` rounded to `f64` (may underflow to 0 for exact targets).
    pub gap: f64,
    /// `ln |x − a_k/a_n|`; `−∞` for an exact hit.
    pub ln_gap: f64,
    /// `+∞` when the gap is zero.
    pub exponent: f64,
}

/// Searches `n <= index_bound` for `|x − a_k/a_n| <= tol`; smallest `n` wins.
pub fn is_jnu_rational(x: f64, lattice: &Lattice, index_bound: usize, tol: f64) -> Option<(usize, usize)> {
    if !(x > 0.0) {
        return None;
    }
    for n in 1..=index_bound {
        let a_n = lattice.a(n)?;
        let Some(k) = lattice.first_index_at_least(x * a_n) else { continue };
        for cand in [k.saturating_sub(1), k, k + 1] {
            if cand == 0 {
                continue;
            }
            if let Some(r) = lattice.ratio(cand, n) {
                if (x - r).abs() <= tol {
                    return Some((cand, n));
                }
            }
        }
    }
    None
}

fn approx(target: f64, k: usize, n: usize, gap: f64, a_n: f64) -> RatioApproximation {
    let ln_gap = gap.ln();
    let exponent = if gap == 0.0 { f64::INFINITY } else { -ln_gap / a_n.ln() };
    RatioApproximation {
        target,
        numerator_index: BigUint::from(k),
        denominator_index: BigUint::from(n),
        gap,
        ln_gap,
        exponent,
    }
}

/// Best quality exponent over ratios with `1 < a_n <= denominator_bound`.
///
/// Non-decreasing in `denominator_bound`.
pub fn liouville_quality(x: f64, lattice: &Lattice, denominator_bound: f64) -> Result<RatioApproximation> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("quality needs finite x > 0, got {x}")));
    }
    let mut best: Option<RatioApproximation> = None;
    let mut n = 1usize;
    while let Some(a_n) = lattice.a(n) {
        if a_n > denominator_bound {
            break;
        }
        if a_n > 1.0 {
            if let Some(k) = lattice.first_index_at_least(x * a_n) {
                for cand in [k.saturating_sub(1), k] {
                    let Some(r) = (cand > 0).then(|| lattice.ratio(cand, n)).flatten() else { continue };
                    let a = approx(x, cand, n, (x - r).abs(), a_n);
                    if best.as_ref().is_none_or(|b| a.exponent > b.exponent) {
                        best = Some(a);
                    }
                }
            }
        }
        n += 1;
    }
    best.ok_or_else(|| Error::Domain(format!("no lattice value in (1, {denominator_bound}]")))
}

/// Exact variant for arithmetic lattices `a_m = scale·m` and rational targets.
///
/// Ratios are then plain fractions `k/n`. Every fraction with exponent above 2
/// satisfies `|x − k/n| < 1/(2n²)` and is therefore a continued-fraction
/// convergent, so convergents plus a brute-force sweep of small `n` find the
/// maximum.
pub fn liouville_quality_exact(
    x: &BigRational,
    lattice: &Lattice,
    denominator_bound: f64,
) -> Result<RatioApproximation> {
    if !lattice.is_arithmetic() {
        return Err(Error::Invalid("exact quality needs an arithmetic lattice".into()));
    }
    if !x.is_positive() {
        return Err(Error::Domain("quality needs x > 0".into()));
    }
    let scale = lattice.a(1).expect("arithmetic lattice");
    let target = crate::fixed::rational_to_f64(x);
    let ln_scale = scale.ln();
    let within = |n: &BigUint| ln_biguint(n) + ln_scale <= denominator_bound.ln();

    let mut candidates: Vec<(BigInt, BigUint)> = Vec::new();
    let sweep = ((denominator_bound / scale).floor() as u64).min(2000);
    for n in 1..=sweep {
        let nb = BigInt::from(n);
        let k = (x * BigRational::from_integer(nb.clone())).round().to_integer();
        candidates.push((k, BigUint::from(n)));
    }
    // convergents p_j/q_j of x
    let (mut p0, mut q0) = (BigInt::from(1), BigInt::zero());
    let (mut p1, mut q1) = (x.floor().to_integer(), BigInt::from(1));
    let mut rest = x - BigRational::from_integer(p1.clone());
    loop {
        let q1u = q1.to_biguint().expect("positive");
        if !within(&q1u) {
            break;
        }
        candidates.push((p1.clone(), q1u));
        if rest.is_zero() {
            break;
        }
        let inv = rest.recip();
        let a = inv.floor().to_integer();
        rest = inv - BigRational::from_integer(a.clone());
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
    }

    let mut best: Option<RatioApproximation> = None;
    for (k, n) in candidates {
        if k <= BigInt::zero() {
            continue;
        }
        let ln_a_n = ln_biguint(&n) + ln_scale;
        if ln_a_n <= 0.0 || !within(&n) {
            continue;
        }
        let gap = (x - BigRational::new(k.clone(), BigInt::from_biguint(Sign::Plus, n.clone()))).abs();
        let (ln_gap, exponent, gap_f) = if gap.is_zero() {
            (f64::NEG_INFINITY, f64::INFINITY, 0.0)
        } else {
            let l = ln_abs(&gap);
            (l, -l / ln_a_n, l.exp())
        };
        if best.as_ref().is_none_or(|b| exponent > b.exponent) {
            best = Some(RatioApproximation {
                target,
                numerator_index: k.to_biguint().expect("positive"),
                denominator_index: n,
                gap: gap_f,
                ln_gap,
                exponent,
            });
        }
    }
    best.ok_or_else(|| Error::Domain(format!("no lattice value in (1, {denominator_bound}]")))
}

/// `Σ_{k=1}^{terms} 10^{−k!}` as an exact rational.
pub fn liouville_constant(terms: u32) -> BigRational {
    let mut sum = BigRational::zero();
    let mut f: u32 = 1;
    for k in 1..=terms {
        f *= k;
        sum += BigRational::new(BigInt::from(1), BigInt::from(10).pow(f));
    }
    sum
}
