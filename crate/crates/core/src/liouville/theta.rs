//! θ(n, x) and the θ-chains `Θ_m = θ(n_m(ε), Θ_{m−1})`.
//!
//! `θ(n, x) = a_{ℓ+1}/a_n` with `ℓ` the index satisfying
//! `a_{ℓ−1}/a_n < x ≤ a_ℓ/a_n` (right-closed). The chain indices are
//! `n_m(ε) = ε_m N^{(2m−1)!} + (1−ε_m) N^{(2m)!}`.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::precise::PreciseZeros;
use super::Lattice;
use crate::error::{Error, Result};
use crate::fixed::decimal_string;

/// Precision budget for chains, in bits of the largest index.
pub const DEFAULT_BUDGET_BITS: u64 = 1 << 20;

/// Finite prefix `ε_1 … ε_M` of a binary sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BinarySequence {
    bits: Vec<u8>,
}

impl BinarySequence {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::Invalid("binary sequence must have at least one bit".into()));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Invalid("binary sequence entries must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    /// Parses `"101"`.
    pub fn parse(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(Error::Invalid(format!("bit string {s:?} must contain only 0 and 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }

    /// All `2^len` prefixes in lexicographic order.
    pub fn all(len: usize) -> Vec<Self> {
        (0..1u32 << len)
            .map(|code| Self { bits: (0..len).map(|i| ((code >> (len - 1 - i)) & 1) as u8).collect() })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `ε_m`, 1-based.
    pub fn bit(&self, m: usize) -> u8 {
        self.bits[m - 1]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

impl fmt::Display for BinarySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Is `1 + N^{-2} + N^{-24} + N^{-720} + … < min{C, N/C²}`?
///
/// Terms past the fourth are below `N^{-40320}` and do not affect an `f64`
/// comparison. Returns `false` outside `N >= 2, C > 1`.
pub fn validate_cutoff(cutoff: u64, constant: f64) -> bool {
    if cutoff < 2 || !(constant > 1.0) || !constant.is_finite() {
        return false;
    }
    let n = cutoff as f64;
    let sum = 1.0 + n.powi(-2) + n.powf(-24.0) + n.powf(-720.0);
    sum < constant.min(n / (constant * constant))
}

/// θ(n, x) on an arbitrary lattice in `f64`.
pub fn theta(lattice: &Lattice, n: usize, x: f64) -> Result<f64> {
    if n == 0 || !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("θ needs n >= 1 and finite x > 0, got n = {n}, x = {x}")));
    }
    let ell = if lattice.is_arithmetic() {
        // a_k / a_n = k / n exactly
        let mut k = (x * n as f64).ceil().max(1.0) as usize;
        while k > 1 && ((k - 1) as f64 / n as f64) >= x {
            k -= 1;
        }
        while (k as f64 / n as f64) < x {
            k += 1;
        }
        k
    } else {
        let a_n = lattice
            .a(n)
            .ok_or_else(|| Error::Domain(format!("lattice has no index {n}")))?;
        lattice
            .first_index_at_least(x * a_n)
            .ok_or_else(|| Error::Domain(format!("lattice does not reach x·a_n = {}", x * a_n)))?
    };
    if ell < 2 {
        return Err(Error::Domain(format!("θ({n}, {x}) needs x > a_1/a_n")));
    }
    lattice
        .ratio(ell + 1, n)
        .ok_or_else(|| Error::Domain(format!("lattice does not cover index {}", ell + 1)))
}

/// θ(n, x) on an arithmetic lattice, exactly: `ℓ = ⌈x n⌉`, `θ = (ℓ+1)/n`.
pub fn theta_exact(n: &BigUint, x: &BigRational) -> Result<BigRational> {
    if n.is_zero() || !x.is_positive() {
        return Err(Error::Domain("θ needs n >= 1 and x > 0".into()));
    }
    let n = BigInt::from_biguint(Sign::Plus, n.clone());
    let xn = x * BigRational::from_integer(n.clone());
    let ell = xn.ceil().to_integer();
    if ell < BigInt::from(2) {
        return Err(Error::Domain(format!("θ(n, x) needs x > 1/n, got x = {x}")));
    }
    Ok(BigRational::new(ell + 1, n))
}

/// Smallest `C` with `1/(Cn) <= θ(n,x) − x <= C/n` over the samples.
pub fn fit_theta_constant(lattice: &Lattice, samples: &[(usize, f64)]) -> Result<f64> {
    let mut c: f64 = 1.0;
    for &(n, x) in samples {
        let d = theta(lattice, n, x)? - x;
        if !(d > 0.0) {
            return Err(Error::Internal(format!("θ({n}, {x}) did not exceed x")));
        }
        let scaled = n as f64 * d;
        c = c.max(scaled).max(1.0 / scaled);
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOptions {
    pub cutoff: u64,
    /// The θ sandwich constant `C`.
    pub constant: f64,
    pub depth: usize,
    pub budget_bits: u64,
}

impl ChainOptions {
    /// `(N, C) = (10, 3)`.
    pub fn new(depth: usize) -> Self {
        Self { cutoff: 10, constant: 3.0, depth, budget_bits: DEFAULT_BUDGET_BITS }
    }
}

/// A truncated θ-chain with certified values.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaChain {
    sequence: BinarySequence,
    cutoff: u64,
    constant: f64,
    x_start: BigRational,
    indices: Vec<BigUint>,
    values: Vec<BigRational>,
    /// Absolute error bound per value; zero on arithmetic lattices.
    errors: Vec<BigRational>,
    exact: bool,
}

fn factorial(k: u64) -> Option<u64> {
    (1..=k).try_fold(1u64, |acc, j| acc.checked_mul(j))
}

fn chain_exponent(m: usize, bit: u8) -> Option<u64> {
    let k = if bit == 1 { 2 * m as u64 - 1 } else { 2 * m as u64 };
    factorial(k)
}

fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Runs the chain to `opts.depth` (at most the prefix length).
///
/// Refuses with [`Error::DepthInfeasible`] when the largest index would need
/// more than `opts.budget_bits` bits.
pub fn theta_chain(
    lattice: &Lattice,
    sequence: &BinarySequence,
    x_start: &BigRational,
    opts: &ChainOptions,
) -> Result<ThetaChain> {
    let depth = opts.depth;
    if depth == 0 || depth > sequence.len() {
        return Err(Error::Invalid(format!(
            "depth {depth} must be between 1 and the number of bits {}",
            sequence.len()
        )));
    }
    if !validate_cutoff(opts.cutoff, opts.constant) {
        return Err(Error::Invalid(format!(
            "cutoff N = {} does not satisfy the cutoff condition for C = {}",
            opts.cutoff, opts.constant
        )));
    }
    if !x_start.is_positive() {
        return Err(Error::Domain("chain start must be positive".into()));
    }
    let log2_n = (opts.cutoff as f64).log2();
    let mut required_bits: u64 = 0;
    for m in 1..=depth {
        let e = chain_exponent(m, sequence.bit(m)).ok_or(Error::DepthInfeasible {
            depth,
            required_bits: u64::MAX,
            budget_bits: opts.budget_bits,
        })?;
        let bits = (e as f64 * log2_n).ceil();
        required_bits = required_bits.max(if bits > u64::MAX as f64 / 4.0 { u64::MAX } else { bits as u64 });
    }
    let exact = lattice.is_arithmetic();
    // values must resolve 1/n_M with room for the zero error bounds
    let needed = if exact { required_bits } else { required_bits.saturating_add(128) };
    if needed > opts.budget_bits {
        return Err(Error::DepthInfeasible { depth, required_bits: needed, budget_bits: opts.budget_bits });
    }

    let big_n = BigUint::from(opts.cutoff);
    let indices: Vec<BigUint> = (1..=depth)
        .map(|m| big_n.pow(chain_exponent(m, sequence.bit(m)).expect("checked") as u32))
        .collect();

    let (values, errors) = if exact {
        let mut values = Vec::with_capacity(depth);
        let mut x = x_start.clone();
        for n in &indices {
            x = theta_exact(n, &x)?;
            values.push(x.clone());
        }
        (values, vec![BigRational::zero(); depth])
    } else {
        surrogate_chain(lattice, &indices, x_start, needed)?
    };

    Ok(ThetaChain {
        sequence: BinarySequence { bits: sequence.bits[..depth].to_vec() },
        cutoff: opts.cutoff,
        constant: opts.constant,
        x_start: x_start.clone(),
        indices,
        values,
        errors,
        exact,
    })
}

fn surrogate_chain(
    lattice: &Lattice,
    indices: &[BigUint],
    x_start: &BigRational,
    bits: u64,
) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let zeros = PreciseZeros::new(lattice, bits)?;
    let ctx = zeros.ctx();
    let pi = zeros.pi();
    let shift = ctx.f64(lattice.order().expect("zero lattice") / 2.0 - 0.25);
    let mut values = Vec::with_capacity(indices.len());
    let mut errors = Vec::with_capacity(indices.len());
    let mut x = ctx.rational(x_start);
    let mut x_err = ctx.ulp();
    for (step, n) in indices.iter().enumerate() {
        let (a_n, e_n) = zeros.zero(n)?;
        let target = ctx.mul(&x, &a_n);
        let x_r = ctx.exact(&x);
        // a_ℓ ≈ (ℓ + ν/2 − 1/4)π
        let guess = ctx.floor(&ctx.sub(&ctx.div(&target, &pi), &shift));
        let mut ell = guess.max(BigInt::one());
        let a_of = |k: &BigInt| zeros.zero(k.magnitude());
        while a_of(&ell)?.0 < target {
            ell += 1;
        }
        while ell > BigInt::one() && a_of(&(&ell - 1))?.0 >= target {
            ell -= 1;
        }
        if ell < BigInt::from(2) {
            return Err(Error::Domain("chain value fell below a_1/a_n".into()));
        }
        // ℓ must be the same for the exact zeros and the exact previous value
        let (a_lo, e_lo) = a_of(&(&ell - 1))?;
        let (a_hi, e_hi) = a_of(&ell)?;
        let t_r = ctx.exact(&target);
        let spread = &x_err * ctx.exact(&a_n) + &x_r * &e_n + ctx.ulp() * BigInt::from(4);
        let below = &t_r - ctx.exact(&a_lo);
        let above = ctx.exact(&a_hi) - &t_r;
        if below <= &spread + &e_lo || above <= &spread + &e_hi {
            return Err(Error::Regime(format!(
                "step {} of the chain lands within the error bound of a zero ratio; raise the precision",
                step + 1
            )));
        }
        let (a_next, e_next) = a_of(&(&ell + 1))?;
        let value = ctx.div(&a_next, &a_n);
        let v_r = ctx.exact(&value);
        let err = v_r.abs() * (e_next / ctx.exact(&a_next) + &e_n / ctx.exact(&a_n))
            + ctx.ulp() * BigInt::from(4);
        values.push(v_r);
        errors.push(err.clone());
        x = value;
        x_err = err;
    }
    Ok((values, errors))
}

impl ThetaChain {
    pub fn depth(&self) -> usize {
        self.values.len()
    }

    pub fn sequence(&self) -> &BinarySequence {
        &self.sequence
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn x_start(&self) -> &BigRational {
        &self.x_start
    }

    pub fn indices(&self) -> &[BigUint] {
        &self.indices
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn errors(&self) -> &[BigRational] {
        &self.errors
    }

    pub fn last(&self) -> &BigRational {
        self.values.last().expect("depth >= 1")
    }

    /// Upper bound on `Θ(ε) − Θ_M(ε)` for every continuation of the prefix:
    /// `C Σ_{m>M} 1/n_m <= 2C / N^{(2M+1)!}`.
    pub fn tail_bound(&self) -> Result<BigRational> {
        let e = factorial(2 * self.depth() as u64 + 1)
            .filter(|&e| e <= u32::MAX as u64)
            .ok_or_else(|| Error::DepthInfeasible {
                depth: self.depth(),
                required_bits: u64::MAX,
                budget_bits: DEFAULT_BUDGET_BITS,
            })?;
        let denom = BigInt::from(self.cutoff).pow(e as u32);
        Ok(rational(self.constant) * BigRational::new(BigInt::from(2), denom))
    }

    /// `[Θ_M − err, Θ_M + err + tail]`, containing the limit `Θ(ε)`.
    pub fn certified_interval(&self) -> Result<(BigRational, BigRational)> {
        let v = self.last();
        let e = self.errors.last().expect("depth >= 1");
        Ok((v - e, v + e + self.tail_bound()?))
    }

    /// `0 < Θ_{m+1} − Θ_m <= C / n_{m+1}` for every step, with errors
    /// counted against the claim.
    pub fn increments_ok(&self) -> bool {
        let c = rational(self.constant);
        self.values.windows(2).zip(self.errors.windows(2)).zip(&self.indices[1..]).all(|((v, e), n)| {
            let d = &v[1] - &v[0];
            let slack = &e[0] + &e[1];
            let bound = &c / BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone()));
            d > slack && d + slack <= bound
        })
    }

    /// `x_start < Θ_m < x_start + C²/N` for all `m`.
    pub fn in_window(&self) -> bool {
        let c = rational(self.constant);
        let hi = &self.x_start + &c * &c / BigRational::from_integer(BigInt::from(self.cutoff));
        self.values.iter().zip(&self.errors).all(|(v, e)| v - e > self.x_start && v + e < hi)
    }

    /// `Θ_M − Θ_m` for 1-based `m < M`.
    pub fn gap_to_last(&self, m: usize) -> BigRational {
        self.last() - &self.values[m - 1]
    }

    /// `C² / n_m^{2m+1}`.
    pub fn rapid_bound_index_form(&self, m: usize) -> BigRational {
        let c = rational(self.constant);
        let n = BigInt::from_biguint(Sign::Plus, self.indices[m - 1].clone());
        &c * &c / BigRational::from_integer(n.pow(2 * m as u32 + 1))
    }

    /// `C³ / a_{n_m}^{2m+1}`, with `a_n` bounded above by `scale⁺ · n` so the
    /// returned value never exceeds the true bound. Arithmetic lattices only.
    pub fn rapid_bound_zero_form(&self, m: usize, lattice: &Lattice) -> Option<BigRational> {
        let scale = lattice.scale_upper()?;
        let c = rational(self.constant);
        let n = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, self.indices[m - 1].clone()));
        let a = scale * n;
        let mut p = BigRational::one();
        for _ in 0..(2 * m + 1) {
            p *= &a;
        }
        Some(&c * &c * &c / p)
    }

    /// Decimal strings, truncated to enough digits to resolve each value.
    pub fn decimal_values(&self) -> Vec<String> {
        self.values
            .iter()
            .zip(&self.indices)
            .map(|(v, n)| {
                let digits = n.to_string().len() + 4;
                decimal_string(v, digits.min(20_000))
            })
            .collect()
    }

    /// Largest certified error as a decimal-exponent string.
    pub fn certified_error(&self) -> String {
        let worst = self.errors.iter().max().cloned().unwrap_or_else(BigRational::zero);
        if worst.is_zero() {
            "0".into()
        } else {
            let log10 = super::log10_abs(&worst);
            format!("1e{}", log10.ceil() as i64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::{generalized_lattice, Lattice};
    use rand::{Rng, SeedableRng};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cutoff_examples() {
        assert!(validate_cutoff(10, 3.0));
        assert!(!validate_cutoff(9, 3.0));
        for n in 2..=99 {
            assert!(!validate_cutoff(n, 1.0001));
        }
        // 1 + N^{-2} drops below C = 1.0001 once N > 100
        assert!(validate_cutoff(101, 1.0001));
        assert!(validate_cutoff(1000, 1.0001));
        assert!(!validate_cutoff(1, 3.0));
    }

    #[test]
    fn theta_examples_half_order() {
        let l = Lattice::half_order();
        assert_eq!(theta(&l, 10, 0.5).unwrap(), 0.6);
        assert_eq!(theta(&l, 10, 0.55).unwrap(), 0.7);
        assert_eq!(theta_exact(&BigUint::from(10u32), &q(1, 2)).unwrap(), q(3, 5));
        assert!(theta(&l, 10, 0.05).is_err());
        assert!(theta(&l, 10, 0.1).is_err());
    }

    #[test]
    fn theta_order_zero() {
        // a_5 ≈ 14.9309 lies below 0.5·a_10 ≈ 15.3173, so ℓ = 6 and θ = a_7/a_10
        let l = Lattice::bessel(0.0, 50).unwrap();
        let z = crate::oracle::integer_order_zeros(0, 10);
        assert!(z[4] / z[9] < 0.5 && 0.5 <= z[5] / z[9]);
        let t = theta(&l, 10, 0.5).unwrap();
        assert!((t - z[6] / z[9]).abs() < 1e-13);
        assert!((t - 0.692_41).abs() < 1e-4);
    }

    #[test]
    fn integer_set_matches_half_order() {
        let ints: Vec<f64> = (1..=100).map(|k| k as f64).collect();
        let g = generalized_lattice(&ints).unwrap();
        assert_eq!(theta(&g, 10, 0.5).unwrap(), 0.6);
        assert_eq!(theta(&Lattice::integers(), 10, 0.5).unwrap(), 0.6);
    }

    #[test]
    fn theta_sandwich_has_uniform_constant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for lattice in [Lattice::half_order(), Lattice::bessel(0.0, 200).unwrap(), Lattice::bessel(1.5, 200).unwrap()] {
            let samples: Vec<(usize, f64)> = (0..500)
                .map(|_| {
                    let n = rng.gen_range(1..=1000);
                    let lo = lattice.a(1).unwrap() / lattice.a(n).unwrap();
                    (n, rng.gen_range(lo * 1.0001..10.0))
                })
                .filter(|&(n, x)| x > lattice.ratio(1, n).unwrap())
                .collect();
            let c = fit_theta_constant(&lattice, &samples).unwrap();
            assert!(c < 3.0, "C = {c}");
            for &(n, x) in &samples {
                let d = theta(&lattice, n, x).unwrap() - x;
                assert!(1.0 / (c * n as f64) <= d * (1.0 + 1e-12) && d <= c / n as f64 * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn exact_chain_example() {
        let l = Lattice::half_order();
        let seq = BinarySequence::parse("11").unwrap();
        let chain = theta_chain(&l, &seq, &q(1, 2), &ChainOptions::new(2)).unwrap();
        assert!(chain.is_exact());
        assert_eq!(chain.indices()[0], BigUint::from(10u32));
        assert_eq!(chain.indices()[1], BigUint::from(1_000_000u32));
        assert_eq!(chain.values()[0], q(3, 5));
        assert_eq!(chain.values()[1], q(600_001, 1_000_000));
        assert_eq!(chain.decimal_values()[1], "0.60000100000");
        assert!(chain.increments_ok());
        assert!(chain.in_window());
    }

    #[test]
    fn prefixes_are_ordered() {
        let l = Lattice::half_order();
        let prefixes = BinarySequence::all(3);
        let intervals: Vec<_> = prefixes
            .iter()
            .map(|s| theta_chain(&l, s, &q(1, 2), &ChainOptions::new(3)).unwrap().certified_interval().unwrap())
            .collect();
        for i in 0..intervals.len() {
            for j in i + 1..intervals.len() {
                assert!(intervals[i].1 < intervals[j].0, "{} vs {}", prefixes[i], prefixes[j]);
            }
        }
    }

    #[test]
    fn depth_budget_is_enforced() {
        let l = Lattice::half_order();
        let seq = BinarySequence::parse("11111").unwrap();
        let err = theta_chain(&l, &seq, &q(1, 2), &ChainOptions::new(5)).unwrap_err();
        assert!(matches!(err, Error::DepthInfeasible { depth: 5, .. }));
        assert!(err.is_numeric_regime());
    }

    #[test]
    fn rejects_bad_cutoff() {
        let l = Lattice::half_order();
        let seq = BinarySequence::parse("1").unwrap();
        let opts = ChainOptions { cutoff: 9, ..ChainOptions::new(1) };
        assert!(matches!(theta_chain(&l, &seq, &q(1, 2), &opts), Err(Error::Invalid(_))));
    }

    #[test]
    fn rapid_approximation_in_index_form() {
        let l = Lattice::half_order();
        for seq in BinarySequence::all(4) {
            let chain = theta_chain(&l, &seq, &q(1, 2), &ChainOptions::new(4)).unwrap();
            for m in [1, 2] {
                assert!(chain.gap_to_last(m) <= chain.rapid_bound_index_form(m), "{seq} m={m}");
            }
        }
    }

    #[test]
    fn rapid_approximation_in_zero_form() {
        // C³/a_{n_m}^{2m+1} replaces n_m by a_{n_m} ≈ π n_m. When ε_m = 0 and
        // ε_{m+1} = 1 the next index is n_m^{2m+1} exactly, the gap is about
        // 1/n_m^{2m+1}, and the bound is smaller by C³/π^{2m+1} < 1
        let l = Lattice::half_order();
        let mut failures = Vec::new();
        let mut expected = Vec::new();
        for seq in BinarySequence::all(4) {
            let chain = theta_chain(&l, &seq, &q(1, 2), &ChainOptions::new(4)).unwrap();
            for m in [1, 2] {
                if chain.gap_to_last(m) > chain.rapid_bound_zero_form(m, &l).unwrap() {
                    failures.push((seq.to_string(), m));
                }
                if seq.bit(m) == 0 && seq.bit(m + 1) == 1 {
                    expected.push((seq.to_string(), m));
                }
            }
        }
        failures.sort();
        expected.sort();
        assert_eq!(failures, expected);
    }

    #[test]
    fn surrogate_chain_for_order_zero() {
        let l = Lattice::bessel(0.0, 200).unwrap();
        let seq = BinarySequence::parse("111").unwrap();
        let chain = theta_chain(&l, &seq, &q(1, 2), &ChainOptions::new(3)).unwrap();
        assert!(!chain.is_exact());
        assert!(chain.increments_ok());
        assert!(chain.in_window());
        let first = crate::fixed::rational_to_f64(&chain.values()[0]);
        assert!((first - theta(&l, 10, 0.5).unwrap()).abs() < 1e-14);
    }
}
