//! Binary fixed-point numbers `v / 2^bits` over `BigInt`.
//!
//! Just enough arithmetic for McMahon surrogates at astronomically large
//! indices. Every operation truncates toward −∞, so the error is at most one
//! unit in the last place per operation.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Fixed {
    pub(crate) v: BigInt,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Ctx {
    pub bits: u64,
}

impl Ctx {
    pub fn new(bits: u64) -> Self {
        Self { bits }
    }

    pub fn int(&self, n: &BigInt) -> Fixed {
        Fixed { v: n << self.bits }
    }

    pub fn uint(&self, n: &BigUint) -> Fixed {
        self.int(&BigInt::from_biguint(Sign::Plus, n.clone()))
    }

    pub fn small(&self, n: i64) -> Fixed {
        self.int(&BigInt::from(n))
    }

    /// Exact for every finite `f64` once `bits >= 1074`; truncated otherwise.
    pub fn f64(&self, x: f64) -> Fixed {
        let r = BigRational::from_float(x).expect("finite f64");
        self.rational(&r)
    }

    pub fn rational(&self, r: &BigRational) -> Fixed {
        let num = r.numer() << self.bits;
        Fixed { v: num.div_floor(r.denom()) }
    }

    pub fn mul(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed { v: (&a.v * &b.v) >> self.bits }
    }

    pub fn div(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed { v: (&a.v << self.bits).div_floor(&b.v) }
    }

    pub fn add(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed { v: &a.v + &b.v }
    }

    pub fn sub(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed { v: &a.v - &b.v }
    }

    pub fn floor(&self, a: &Fixed) -> BigInt {
        &a.v >> self.bits
    }

    pub fn exact(&self, a: &Fixed) -> BigRational {
        BigRational::new(a.v.clone(), BigInt::one() << self.bits)
    }

    /// One unit in the last place, as a rational.
    pub fn ulp(&self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.bits)
    }

    /// π, via Machin's formula, with error below 2^{-bits+4}.
    pub fn pi(&self) -> Fixed {
        let guard = 32;
        let inner = Ctx::new(self.bits + guard);
        let a = inner.arctan_inv(5);
        let b = inner.arctan_inv(239);
        let v = a.v * 16 - b.v * 4;
        Fixed { v: v >> guard }
    }

    fn arctan_inv(&self, k: u32) -> Fixed {
        let one = BigInt::one() << self.bits;
        let k2 = BigInt::from(k) * BigInt::from(k);
        let mut power = one / BigInt::from(k);
        let mut sum = BigInt::zero();
        let mut j: u64 = 0;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * j + 1);
            if j.is_multiple_of(2) {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &k2;
            j += 1;
        }
        Fixed { v: sum }
    }

    #[cfg(test)]
    pub fn value(&self, a: &Fixed) -> f64 {
        let r = self.exact(a);
        rational_to_f64(&r)
    }
}

/// `f64` value of a big rational, correct to a few ulps, including values
/// whose numerator and denominator overflow `f64` separately.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    // 64 significant bits in the quotient
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 { (num << shift as u64) / den } else { num / (den << (-shift) as u64) };
    let mut v = q.to_f64().expect("64-bit quotient");
    let mut e = -shift;
    // apply 2^e in steps that stay inside the exponent range
    while e > 0 {
        let s = e.min(1000);
        v *= 2f64.powi(s as i32);
        e -= s;
    }
    while e < 0 {
        let s = (-e).min(1000);
        v *= 2f64.powi(-(s as i32));
        e += s;
        if v == 0.0 {
            break;
        }
    }
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// `ln |r|` for a nonzero big rational.
pub(crate) fn ln_abs(r: &BigRational) -> f64 {
    ln_biguint(r.numer().magnitude()) - ln_biguint(r.denom().magnitude())
}

/// Natural log of a positive big integer from its top 64 bits.
pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().expect("small").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Decimal expansion of `r` truncated to `digits` fractional digits.
pub(crate) fn decimal_string(r: &BigRational, digits: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (a.numer() * &scale).div_floor(a.denom());
    let (int, frac) = scaled.div_rem(&scale);
    let mut s = String::new();
    if neg {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}
