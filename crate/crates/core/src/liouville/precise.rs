//! Zeros of `j_ν` for real `ν` in binary fixed point, with error bounds.
//!
//! Small zeros come from Newton's method on the power series, carried with
//! enough guard bits to absorb its cancellation. Large zeros solve the phase
//! relation `z = β − atan(Q(z)/P(z))` of the Hankel expansion, `β = (m + ν/2
//! − 1/4)π`, whose truncation error for real order is bounded by the first
//! omitted term.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Lattice;
use crate::error::{Error, Result};
use crate::fixed::{Ctx, Fixed};

pub(super) struct PreciseZeros<'a> {
    lattice: &'a Lattice,
    ctx: Ctx,
    /// working precision for intermediate sums
    inner: Ctx,
    order: BigRational,
    order_f64: f64,
    pi: Fixed,
    computed: usize,
    cache: RefCell<HashMap<BigUint, (Fixed, BigRational)>>,
}

fn fx(v: BigInt) -> Fixed {
    Fixed { v }
}

fn abs(a: &Fixed) -> Fixed {
    fx(a.v.abs())
}

impl<'a> PreciseZeros<'a> {
    pub fn new(lattice: &'a Lattice, bits: u64) -> Result<Self> {
        let order_f64 = lattice
            .order()
            .ok_or_else(|| Error::Invalid("θ-chains need an arithmetic or Bessel-zero lattice".into()))?;
        let computed = lattice.zero_lattice().map_or(0, |(_, z)| z.computed_len());
        let inner = Ctx::new(bits + 64);
        Ok(Self {
            lattice,
            ctx: Ctx::new(bits),
            inner,
            order: BigRational::from_float(order_f64).expect("finite order"),
            order_f64,
            pi: inner.pi(),
            computed,
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn pi(&self) -> Fixed {
        self.ctx.rational(&self.inner.exact(&self.pi))
    }

    /// `(a_m, bound on |a_m − value|)` at the outer precision.
    pub fn zero(&self, m: &BigUint) -> Result<(Fixed, BigRational)> {
        if let Some(hit) = self.cache.borrow().get(m) {
            return Ok(hit.clone());
        }
        let seed = self.seed(m);
        let bits = self.ctx.bits as f64;
        let approx = self.inner.exact(&seed);
        let z_est = crate::fixed::rational_to_f64(&approx);
        let (z, err) = if z_est >= 40.0_f64.max((bits + 64.0) / 2.5) {
            self.hankel_zero(m, seed)?
        } else {
            self.series_zero(seed, z_est)?
        };
        let out = (self.ctx.rational(&self.inner.exact(&z)), err + self.ctx.ulp());
        self.cache.borrow_mut().insert(m.clone(), out.clone());
        Ok(out)
    }

    fn beta(&self, m: &BigUint) -> Fixed {
        let c = &self.inner;
        let shift = &self.order / BigInt::from(2) - BigRational::new(BigInt::one(), BigInt::from(4));
        c.mul(&c.add(&c.uint(m), &c.rational(&shift)), &self.pi)
    }

    fn seed(&self, m: &BigUint) -> Fixed {
        if let Some(k) = m.to_usize().filter(|&k| k >= 1 && k <= self.computed) {
            return self.inner.f64(self.lattice.a(k).expect("computed zero"));
        }
        // McMahon through β^{-3}
        let c = &self.inner;
        let beta = self.beta(m);
        let mu = 4.0 * self.order_f64 * self.order_f64;
        let eight_beta = c.mul(&c.small(8), &beta);
        let c1 = c.div(&c.f64(mu - 1.0), &eight_beta);
        let cube = c.mul(&c.mul(&eight_beta, &eight_beta), &eight_beta);
        let c3 = c.div(&c.f64(4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / 3.0), &cube);
        c.sub(&c.sub(&beta, &c1), &c3)
    }

    fn series_zero(&self, seed: Fixed, z_est: f64) -> Result<(Fixed, BigRational)> {
        // the largest series term is about e^z
        let guard = (z_est * std::f64::consts::LOG2_E).ceil() as u64 + 64;
        let w = Ctx::new(self.inner.bits + guard);
        let nu = w.rational(&self.order);
        let mut z = w.rational(&self.inner.exact(&seed));
        let tiny = w.rational(&BigRational::new(BigInt::one(), BigInt::one() << (self.inner.bits + 8)));
        for _ in 0..100 {
            let (s, ds, _) = series_with_derivative(&w, &z, &nu);
            if ds.v.is_zero() {
                return Err(Error::Regime("vanishing derivative in zero refinement".into()));
            }
            let step = w.div(&s, &ds);
            z = w.sub(&z, &step);
            if abs(&step) <= tiny {
                break;
            }
        }
        let (s, ds, terms) = series_with_derivative(&w, &z, &nu);
        let num = w.exact(&abs(&s)) + w.ulp() * BigInt::from(terms as u64 + 8);
        let err = num / w.exact(&abs(&ds)) * BigInt::from(2);
        Ok((self.inner.rational(&w.exact(&z)), err + self.inner.ulp() * BigInt::from(4)))
    }

    fn hankel_zero(&self, m: &BigUint, seed: Fixed) -> Result<(Fixed, BigRational)> {
        let c = &self.inner;
        let beta = self.beta(m);
        let mu = c.rational(&(&self.order * &self.order * BigInt::from(4)));
        let mut z = seed;
        let mut trunc = BigRational::zero();
        let mut converged = false;
        for _ in 0..400 {
            let (p, q, t) = hankel_pq(c, &z, &mu);
            let y = c.div(&q, &p);
            if abs(&y) >= c.rational(&BigRational::new(BigInt::one(), BigInt::from(2))) {
                return Err(Error::Regime("Hankel phase too large for zero refinement".into()));
            }
            let next = c.sub(&beta, &atan_small(c, &y));
            let delta = abs(&c.sub(&next, &z));
            z = next;
            trunc = t / c.exact(&abs(&p));
            if delta.v <= BigInt::from(2) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Regime("phase iteration for a large zero did not converge".into()));
        }
        Ok((z, trunc * BigInt::from(2) + c.ulp() * BigInt::from(64)))
    }
}

/// `(S, S′, terms)` for `S(z) = Σ (−z²/4)^k / (k! (ν+1)_k)`.
fn series_with_derivative(c: &Ctx, z: &Fixed, nu: &Fixed) -> (Fixed, Fixed, usize) {
    let w = c.div(&c.mul(z, z), &c.small(4));
    let neg_w = fx(-w.v.clone());
    let mut u = c.small(1);
    let mut s = u.clone();
    let mut d = fx(BigInt::zero());
    let mut k: i64 = 1;
    let peak = (crate::fixed::rational_to_f64(&c.exact(&w))).sqrt() as i64 + 2;
    loop {
        let den = c.mul(&c.small(k), &c.add(&c.small(k), nu));
        u = c.div(&c.mul(&u, &neg_w), &den);
        if u.v.magnitude() <= &BigUint::one() && k > peak {
            break;
        }
        s = c.add(&s, &u);
        d = c.add(&d, &fx(&u.v * (2 * k)));
        k += 1;
    }
    (s, c.div(&d, z), k as usize)
}

/// `(P, Q, bound on the truncation error)` of the Hankel expansion at `z`.
fn hankel_pq(c: &Ctx, z: &Fixed, mu: &Fixed) -> (Fixed, Fixed, BigRational) {
    let eight_z = fx(&z.v * 8);
    let mut p = c.small(1);
    let mut q = fx(BigInt::zero());
    let mut t = c.small(1);
    let mut k: i64 = 1;
    let bound = loop {
        let odd = (2 * k - 1) * (2 * k - 1);
        let num = c.sub(mu, &c.small(odd));
        let next = c.div(&c.mul(&t, &num), &fx(&eight_z.v * k));
        if num.v.is_zero() {
            // exact termination for half-integer orders
            break BigRational::zero();
        }
        if next.v.magnitude() <= &BigUint::one() {
            break c.ulp();
        }
        if next.v.abs() > t.v.abs() && k > 2 {
            break c.exact(&abs(&next));
        }
        let signed = if (k / 2) % 2 == 0 { next.clone() } else { fx(-next.v.clone()) };
        if k % 2 == 1 {
            q = c.add(&q, &signed);
        } else {
            p = c.add(&p, &signed);
        }
        t = next;
        k += 1;
    };
    (p, q, bound + c.ulp() * BigInt::from(k as u64))
}

/// `atan y` for `|y| < 1/2`.
fn atan_small(c: &Ctx, y: &Fixed) -> Fixed {
    let y2 = c.mul(y, y);
    let mut power = y.clone();
    let mut sum = fx(BigInt::zero());
    let mut j: i64 = 0;
    while power.v.magnitude() > &BigUint::one() {
        let term = fx(&power.v / (2 * j + 1));
        sum = if j % 2 == 0 { c.add(&sum, &term) } else { c.sub(&sum, &term) };
        power = c.mul(&power, &y2);
        j += 1;
    }
    sum
}
