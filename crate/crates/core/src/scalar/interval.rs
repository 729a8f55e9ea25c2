//! Rational interval arithmetic used to certify signs and orderings.
//!
//! Every operation rounds outward: the result contains the exact image of
//! every point of the operands.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Closed interval `[lo, hi]` with rational endpoints, `lo <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn zero() -> Self {
        Self::point(BigRational::zero())
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn intersect(&self, o: &Self) -> Option<Self> {
        let lo = if self.lo > o.lo { self.lo.clone() } else { o.lo.clone() };
        let hi = if self.hi < o.hi { self.hi.clone() } else { o.hi.clone() };
        (lo <= hi).then_some(Self { lo, hi })
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }

    pub fn neg(&self) -> Self {
        Self { lo: -self.hi.clone(), hi: -self.lo.clone() }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if v < &lo {
                lo = v.clone();
            }
            if v > &hi {
                hi = v.clone();
            }
        }
        Self { lo, hi }
    }

    /// Reciprocal; `None` when the interval touches zero.
    pub fn recip(&self) -> Option<Self> {
        if self.contains_zero() {
            return None;
        }
        Some(Self { lo: self.hi.recip(), hi: self.lo.recip() })
    }

    pub fn sqr(&self) -> Self {
        if self.contains_zero() {
            let a = &self.lo * &self.lo;
            let b = &self.hi * &self.hi;
            Self { lo: BigRational::zero(), hi: if a > b { a } else { b } }
        } else {
            self.mul(self)
        }
    }

    pub fn powi(&self, e: i64) -> Option<Self> {
        if e == 0 {
            return Some(Self::point(BigRational::one()));
        }
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let k = e.unsigned_abs();
        if k.is_multiple_of(2) {
            let mut acc = base.sqr();
            let mut left = k / 2 - 1;
            let sq = acc.clone();
            while left > 0 {
                acc = acc.mul(&sq);
                left -= 1;
            }
            Some(acc)
        } else {
            // odd powers are monotone
            let lo = num_traits::pow(base.lo.clone(), k as usize);
            let hi = num_traits::pow(base.hi.clone(), k as usize);
            Some(Self { lo, hi })
        }
    }

    /// `self^(p/q)` for a positive interval.
    pub fn powr(&self, e: &BigRational) -> Option<Self> {
        if e.is_integer() {
            return self.powi(e.to_integer().to_i64()?);
        }
        if !self.lo.is_positive() {
            return None;
        }
        let p = e.numer().to_i64()?;
        let q = e.denom().to_u32()?;
        let a = RatInterval::point(self.lo.clone()).powi(p)?;
        let b = RatInterval::point(self.hi.clone()).powi(p)?;
        let (lo_base, hi_base) = if a.lo <= b.lo { (a.lo, b.lo) } else { (b.lo, a.lo) };
        Some(Self { lo: root_lower(&lo_base, q), hi: root_upper(&hi_base, q) })
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.12}, {:.12}]",
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN)
        )
    }
}

/// Rational approximation of a finite float, exact binary expansion.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Largest-ish rational `r` with `r^q <= a`, verified exactly.
fn root_lower(a: &BigRational, q: u32) -> BigRational {
    let guess = a.to_f64().unwrap_or(0.0).max(0.0).powf(1.0 / q as f64);
    let mut r = rational_from_f64(guess * (1.0 - 1e-12)).unwrap_or_else(BigRational::zero);
    while num_traits::pow(r.clone(), q as usize) > *a {
        r /= BigRational::from_integer(BigInt::from(2));
    }
    r
}

/// Smallish rational `r` with `r^q >= a`, verified exactly.
fn root_upper(a: &BigRational, q: u32) -> BigRational {
    let guess = a.to_f64().unwrap_or(1.0).max(0.0).powf(1.0 / q as f64);
    let mut r = rational_from_f64(guess * (1.0 + 1e-12) + 1e-300).unwrap_or_else(BigRational::one);
    if r.is_zero() {
        r = BigRational::one();
    }
    while num_traits::pow(r.clone(), q as usize) < *a {
        r *= BigRational::from_integer(BigInt::from(2));
    }
    r
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexInterval {
    pub re: RatInterval,
    pub im: RatInterval,
}

impl ComplexInterval {
    pub fn real(re: RatInterval) -> Self {
        Self { re, im: RatInterval::zero() }
    }

    pub fn point(re: BigRational, im: BigRational) -> Self {
        Self { re: RatInterval::point(re), im: RatInterval::point(im) }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    /// Enclosure of `|z|^2`.
    pub fn norm(&self) -> RatInterval {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn excludes_zero(&self) -> bool {
        !self.re.contains_zero() || !self.im.contains_zero()
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        let n = o.norm();
        let inv = n.recip()?;
        let conj = Self { re: o.re.clone(), im: o.im.neg() };
        let p = self.mul(&conj);
        Some(Self { re: p.re.mul(&inv), im: p.im.mul(&inv) })
    }

    pub fn contains(&self, re: &BigRational, im: &BigRational) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }
}

/// Enclosure of pi with roughly `digits` correct decimal digits (Machin's formula).
pub fn pi_enclosure(digits: u32) -> RatInterval {
    let guard = 10u32;
    let scale = num_traits::pow(BigInt::from(10), (digits + guard) as usize);
    let atan_inv = |n: i64| -> BigInt {
        // atan(1/n) * scale by the alternating series; each term truncates toward zero
        let n = BigInt::from(n);
        let n2 = &n * &n;
        let mut power = &scale / &n;
        let mut sum = BigInt::zero();
        let mut k: i64 = 0;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * k + 1);
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
            power /= &n2;
            k += 1;
        }
        sum
    };
    let approx = BigInt::from(16) * atan_inv(5) - BigInt::from(4) * atan_inv(239);
    // truncation errors are bounded by a few units per term; 10^4 units is ample
    let slack = BigInt::from(10_000);
    let lo = BigRational::new(&approx - &slack, scale.clone());
    let hi = BigRational::new(&approx + &slack, scale);
    RatInterval::new(lo, hi)
}

/// Enclosure of Euler's number `e`.
pub fn e_enclosure(digits: u32) -> RatInterval {
    let guard = 10u32;
    let scale = num_traits::pow(BigInt::from(10), (digits + guard) as usize);
    let mut term = scale.clone();
    let mut sum = BigInt::zero();
    let mut k = 1u64;
    while !term.is_zero() {
        sum += &term;
        term /= BigInt::from(k);
        k += 1;
    }
    let slack = BigInt::from(10_000);
    RatInterval::new(
        BigRational::new(&sum - &slack, scale.clone()),
        BigRational::new(&sum + &slack, scale),
    )
}
