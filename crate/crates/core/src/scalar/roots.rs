//! Univariate polynomials over [`Scalar`] and exact root extraction.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::DensePoly;
use super::{Scalar, SymbolId, SymbolTable};

/// Dense polynomial, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("the polynomial is identically zero")]
    ZeroPolynomial,
}

/// Roots found exactly, plus whatever could not be split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub roots: Vec<(Scalar, usize)>,
    pub unresolved: Option<UniPoly>,
}

impl RootSet {
    pub fn nonzero(&self) -> impl Iterator<Item = &(Scalar, usize)> {
        self.roots.iter().filter(|(r, _)| !r.is_zero())
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// `C - r`.
    pub fn linear_root(r: &Scalar) -> Self {
        Self::new(vec![r.neg(), Scalar::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; 0 for constants and the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc.mul(x).add(c))
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).sub(&o.coeff(k))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(Scalar::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&Scalar::from_int(k as i64)))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let lead_inv = d.leading().inv().expect("nonzero leading coefficient");
        let dd = d.degree();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].mul(&lead_inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = rem[k].sub(&q.mul(dc));
            }
            quot[i - dd] = q;
        }
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Ok(inv) => self.scale(&inv),
            Err(_) => self.clone(),
        }
    }

    pub fn gcd(&self, o: &Self) -> Self {
        if self.degree() > 0 && o.degree() > 0 && coprime_by_specialization(self, o) {
            return Self::constant(Scalar::one());
        }
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable, var: &'a str) -> UniPolyDisplay<'a> {
        UniPolyDisplay { p: self, table, var }
    }

    /// True when all coefficients are rational numbers.
    fn rational_coeffs(&self) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }
}

pub struct UniPolyDisplay<'a> {
    p: &'a UniPoly,
    table: &'a SymbolTable,
    var: &'a str,
}

impl fmt::Display for UniPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.p.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let pow = match k {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{k}", self.var),
            };
            if k == 0 {
                write!(f, "{}", wrap(c, self.table))?;
            } else if c.is_one() {
                write!(f, "{pow}")?;
            } else {
                write!(f, "{}*{pow}", wrap(c, self.table))?;
            }
        }
        Ok(())
    }
}

fn wrap(c: &Scalar, table: &SymbolTable) -> String {
    if c.is_compound() {
        format!("({})", c.display(table))
    } else {
        c.display(table).to_string()
    }
}

/// Coefficients evaluated at rational symbol values; `None` if the degree drops
/// or a coefficient cannot be evaluated there.
fn specialize(p: &UniPoly, point: &HashMap<SymbolId, BigRational>) -> Option<DensePoly> {
    let v: Option<Vec<_>> = p.coeffs.iter().map(|c| c.eval_at(point)).collect();
    let v = v?;
    (!v.last()?.is_zero()).then_some(DensePoly(v))
}

/// Sound shortcut: a trivial gcd after specializing the symbols (leading
/// coefficients kept) implies a trivial gcd over the function field.
fn coprime_by_specialization(a: &UniPoly, b: &UniPoly) -> bool {
    let syms: BTreeSet<SymbolId> = a.coeffs.iter().chain(&b.coeffs).flat_map(|c| c.symbols()).collect();
    for attempt in 0..3i64 {
        let point: HashMap<SymbolId, BigRational> = syms
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let r = BigRational::new(BigInt::from(3 * k as i64 + 5 * attempt + 2), BigInt::from(attempt + 2));
                (*s, &r * &r)
            })
            .collect();
        if let (Some(da), Some(db)) = (specialize(a, &point), specialize(b, &point)) {
            if da.gcd(&db).0.len() == 1 {
                return true;
            }
        }
    }
    false
}

/// Exact `sqrt` of a scalar when its numerator times denominator is a perfect square.
pub fn scalar_sqrt(s: &Scalar) -> Option<Scalar> {
    if s.is_zero() {
        return Some(Scalar::zero());
    }
    let nd = s.numer().mul(s.denom());
    let root = nd.sqrt()?;
    Scalar::from_fraction(root, s.denom().clone()).ok()
}

/// All roots reachable by the exact strategy chain.
///
/// Zero roots are deflated first, pure powers `c*(C - r)^k` are recognized
/// directly, and otherwise the square-free parts are split when their degree
/// is at most two or they have rational roots.  Anything left over is
/// returned as the unresolved factor.
pub fn poly_roots_exact(p: &UniPoly) -> Result<RootSet, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    let zeros = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push((Scalar::zero(), zeros));
    }
    let q = UniPoly::new(p.coeffs[zeros..].to_vec());
    if q.degree() == 0 {
        return Ok(RootSet { roots, unresolved: None });
    }
    if let Some(r) = pure_power_root(&q) {
        roots.push((r, q.degree()));
        return Ok(RootSet { roots, unresolved: None });
    }
    let mut unresolved = UniPoly::constant(Scalar::one());
    for (mult, factor) in square_free(&q) {
        let (found, rest) = split_square_free(&factor);
        roots.extend(found.into_iter().map(|r| (r, mult)));
        if rest.degree() > 0 {
            unresolved = unresolved.mul(&rest.pow(mult));
        }
    }
    let unresolved = (unresolved.degree() > 0).then_some(unresolved);
    Ok(RootSet { roots, unresolved })
}

/// `r` when `q = a * (C - r)^d` with `d = deg q`.
fn pure_power_root(q: &UniPoly) -> Option<Scalar> {
    let d = q.degree();
    let lead = q.leading();
    let r = q.coeff(d - 1).div(&lead.mul(&Scalar::from_int(d as i64))).ok()?.neg();
    let candidate = UniPoly::linear_root(&r).pow(d).scale(&lead);
    (candidate == *q).then_some(r)
}

/// Yun's square-free decomposition: `(i, f_i)` with `q = lc * prod f_i^i`.
fn square_free(q: &UniPoly) -> Vec<(usize, UniPoly)> {
    let mut out = Vec::new();
    let dq = q.derivative();
    let a0 = q.gcd(&dq);
    let mut b = q.div_rem(&a0).0;
    let c = dq.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        let b_next = b.div_rem(&a).0;
        let c_next = d.div_rem(&a).0;
        d = c_next.sub(&b_next.derivative());
        if a.degree() > 0 {
            out.push((i, a));
        }
        b = b_next;
        i += 1;
        if i > 512 {
            break;
        }
    }
    out
}

/// Roots of a square-free polynomial and the part that could not be split.
fn split_square_free(f: &UniPoly) -> (Vec<Scalar>, UniPoly) {
    let mut found = Vec::new();
    let mut rest = f.clone();
    if rest.degree() >= 3 {
        if let Some(coeffs) = rest.rational_coeffs() {
            for r in rational_roots(&coeffs) {
                let s = Scalar::from_rational(r);
                let (quot, rem) = rest.div_rem(&UniPoly::linear_root(&s));
                if rem.is_zero() {
                    found.push(s);
                    rest = quot;
                }
            }
        }
    }
    match rest.degree() {
        1 => {
            let r = rest.coeff(0).div(&rest.coeff(1)).expect("nonzero leading").neg();
            found.push(r);
            rest = UniPoly::constant(Scalar::one());
        }
        2 => {
            let (a, b, c) = (rest.coeff(2), rest.coeff(1), rest.coeff(0));
            let disc = b.mul(&b).sub(&Scalar::from_int(4).mul(&a).mul(&c));
            if let Some(s) = scalar_sqrt(&disc) {
                let two_a = Scalar::from_int(2).mul(&a);
                let r1 = b.neg().add(&s).div(&two_a).expect("nonzero");
                let r2 = b.neg().sub(&s).div(&two_a).expect("nonzero");
                found.push(r1);
                found.push(r2);
                rest = UniPoly::constant(Scalar::one());
            }
        }
        _ => {}
    }
    (found, rest)
}

/// Candidates `p/q` with `p | a0`, `q | an` that actually vanish, each listed once.
fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
    let (Some(a0), Some(an)) = (ints.iter().find(|c| !c.is_zero()), ints.last()) else {
        return Vec::new();
    };
    let (Some(ps), Some(qs)) = (divisors(a0), divisors(an)) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for p in &ps {
        for q in &qs {
            for sign in [1, -1] {
                let r = BigRational::new(p * sign, q.clone());
                if out.contains(&r) {
                    continue;
                }
                let v = coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &r + c);
                if v.is_zero() {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Positive divisors of `n` by trial division; `None` when `n` is too large to factor cheaply.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}
