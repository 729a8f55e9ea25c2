//! Sparse polynomials over `Q(i)` in the free symbols, with rational exponents.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gaussian::GaussianRational;
use super::interval::{ComplexInterval, RatInterval};
use super::symbol::{SymbolId, SymbolTable};

/// Product of symbol powers, kept sorted by symbol id with nonzero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(SymbolId, BigRational)>);

impl Monomial {
    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(id: SymbolId) -> Self {
        Self(vec![(id, BigRational::one())])
    }

    pub fn power(id: SymbolId, e: BigRational) -> Self {
        if e.is_zero() {
            Self::one()
        } else {
            Self(vec![(id, e)])
        }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (SymbolId, BigRational)>) -> Self {
        let mut acc: BTreeMap<SymbolId, BigRational> = BTreeMap::new();
        for (id, e) in pairs {
            *acc.entry(id).or_insert_with(BigRational::zero) += e;
        }
        Self(acc.into_iter().filter(|(_, e)| !e.is_zero()).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(SymbolId, BigRational)> {
        self.0.iter()
    }

    pub fn exponent(&self, id: SymbolId) -> BigRational {
        self.0
            .iter()
            .find(|(s, _)| *s == id)
            .map(|(_, e)| e.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> BigRational {
        self.0.iter().fold(BigRational::zero(), |acc, (_, e)| acc + e)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_pairs(self.0.iter().chain(o.0.iter()).cloned())
    }

    /// `self / o`, exponents may become negative.
    pub fn div(&self, o: &Self) -> Self {
        Self::from_pairs(self.0.iter().cloned().chain(o.0.iter().map(|(s, e)| (*s, -e.clone()))))
    }

    pub fn pow(&self, k: &BigRational) -> Self {
        Self::from_pairs(self.0.iter().map(|(s, e)| (*s, e * k)))
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|(_, e)| e.is_negative())
    }

    fn cmp_lex(&self, o: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        let zero = BigRational::zero();
        loop {
            let a = self.0.get(i);
            let b = o.0.get(j);
            let (id, ea, eb) = match (a, b) {
                (None, None) => return Ordering::Equal,
                (Some((ia, ea)), None) => (*ia, ea, &zero),
                (None, Some((ib, eb))) => (*ib, &zero, eb),
                (Some((ia, ea)), Some((ib, eb))) => match ia.cmp(ib) {
                    Ordering::Less => (*ia, ea, &zero),
                    Ordering::Greater => (*ib, &zero, eb),
                    Ordering::Equal => (*ia, ea, eb),
                },
            };
            match ea.cmp(eb) {
                Ordering::Equal => {}
                ord => return ord,
            }
            if a.is_some_and(|(s, _)| *s == id) {
                i += 1;
            }
            if b.is_some_and(|(s, _)| *s == id) {
                j += 1;
            }
        }
    }

    /// Enclosure of the monomial's value.
    pub fn eval_enclosure(&self, table: &SymbolTable, level: u32) -> Option<RatInterval> {
        let mut acc = RatInterval::point(BigRational::one());
        for (id, e) in &self.0 {
            let enc = table.enclosure(*id, level);
            acc = acc.mul(&enc.powr(e)?);
        }
        Some(acc)
    }
}

/// Graded order: total degree first, then lexicographic by symbol id.
impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.cmp_lex(o))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse polynomial; the greatest key is the leading term.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn term(m: Monomial, c: GaussianRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn var(id: SymbolId) -> Self {
        Self::term(Monomial::var(id), GaussianRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    /// The coefficient if the polynomial is constant (zero counts).
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn trailing(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut sq = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&sq);
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    /// Multiplies every exponent by `k`; `k` must be positive.
    pub fn rescale_exponents(&self, k: &BigRational) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.pow(k), c.clone())).collect() }
    }

    pub fn symbols(&self) -> BTreeSet<SymbolId> {
        self.terms.keys().flat_map(|m| m.iter().map(|(s, _)| *s)).collect()
    }

    /// Least exponent of `id` over all terms, absent counting as 0.
    pub fn min_exponent(&self, id: SymbolId) -> BigRational {
        self.terms
            .keys()
            .map(|m| m.exponent(id))
            .min()
            .unwrap_or_else(BigRational::zero)
    }

    /// Exact quotient when `d` divides `self` with non-negative quotient exponents.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (dm, dc) = d.leading()?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        let mut guard = 0usize;
        while let Some((rm, rc)) = rem.leading() {
            guard += 1;
            if guard > 20_000 {
                return None;
            }
            let qm = rm.div(dm);
            if qm.has_negative() {
                return None;
            }
            let qc = rc * &dc_inv;
            let t = Self::term(qm, qc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Exact square root when `self` is a perfect square over `Q(i)`.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (lm, lc) = self.leading()?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let min_deg = self.trailing()?.0.degree();
        let mut root = Self::term(lm.pow(&half), lc.sqrt()?);
        let (root_lm, root_lc) = {
            let (m, c) = root.leading()?;
            (m.clone(), c.clone())
        };
        let two_lc_inv = (&GaussianRational::from_int(2) * &root_lc).inv()?;
        let mut rem = self.sub(&root.mul(&root));
        let mut guard = 0usize;
        while let Some((rm, rc)) = rem.leading() {
            guard += 1;
            if guard > 2_000 {
                return None;
            }
            let tm = rm.div(&root_lm);
            if tm >= root_lm || tm.degree() * BigRational::from_integer(2.into()) < min_deg {
                return None;
            }
            let t = Self::term(tm, rc * &two_lc_inv);
            // (s + t)^2 - p = rem - 2 s t - t^2 after the update below
            let two_st = root.mul(&t).scale(&GaussianRational::from_int(2));
            rem = rem.sub(&two_st).sub(&t.mul(&t));
            root = root.add(&t);
        }
        Some(root)
    }

    /// Enclosure of the value with each symbol ranging over its enclosure.
    pub fn eval_enclosure(&self, table: &SymbolTable, level: u32) -> Option<ComplexInterval> {
        let mut acc = ComplexInterval::point(BigRational::zero(), BigRational::zero());
        for (m, c) in &self.terms {
            let v = m.eval_enclosure(table, level)?;
            let term = ComplexInterval { re: v.scale(&c.re), im: v.scale(&c.im) };
            acc = acc.add(&term);
        }
        Some(acc)
    }

    /// Exact value at a rational point; `None` if some power is irrational.
    pub fn eval_at(&self, point: &HashMap<SymbolId, BigRational>) -> Option<GaussianRational> {
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut v = BigRational::one();
            for (id, e) in m.iter() {
                let x = point.get(id)?;
                v *= rational_power(x, e)?;
            }
            acc = &acc + &(c * &GaussianRational::real(v));
        }
        Some(acc)
    }

    /// Least common multiple of all coefficient denominators.
    pub fn denom_lcm(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()))
    }

    /// Gcd of all integer numerators, assuming integral coefficients.
    pub fn numer_gcd(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, c| {
            acc.gcd(c.re.numer()).gcd(c.im.numer())
        })
    }
}

fn rational_power(x: &BigRational, e: &BigRational) -> Option<BigRational> {
    let p = e.numer().to_i32()?;
    let q = e.denom().to_u32()?;
    let root = super::gaussian::rational_nth_root(x, q)?;
    if p < 0 {
        if root.is_zero() {
            return None;
        }
        Some(num_traits::pow(root.recip(), p.unsigned_abs() as usize))
    } else {
        Some(num_traits::pow(root, p as usize))
    }
}

/// Dense univariate polynomial over `Q(i)`, used for the single-symbol gcd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DensePoly(pub Vec<GaussianRational>);

impl DensePoly {
    fn trim(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn monic(&self) -> Self {
        match self.0.last().and_then(|c| c.inv()) {
            Some(inv) => Self(self.0.iter().map(|c| c * &inv).collect()),
            None => self.clone(),
        }
    }

    pub(crate) fn div_rem(&self, d: &Self) -> (Self, Self) {
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lead_inv = d.0.last().and_then(|c| c.inv()).expect("division by zero polynomial");
        if rem.len() < d.0.len() {
            return (Self(Vec::new()), self.clone());
        }
        let mut quot = vec![GaussianRational::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let q = &rem[i] * &lead_inv;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = &rem[k] - &(&q * dc);
            }
            quot[i - dd] = q;
        }
        (Self(quot).trim(), Self(rem).trim())
    }

    pub(crate) fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone().trim();
        let mut b = o.clone().trim();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            // monic remainders keep the coefficient sizes in check
            b = r.monic();
        }
        a.monic()
    }
}

/// View of a single-symbol polynomial as dense in `t = s^(1/scale)`.
pub(crate) struct UniView {
    pub symbol: Option<SymbolId>,
    pub scale: BigInt,
}

impl UniView {
    /// Builds a view covering all given polynomials, which must have non-negative exponents.
    pub(crate) fn for_polys(polys: &[&MPoly]) -> Option<Self> {
        let mut syms = BTreeSet::new();
        for p in polys {
            syms.extend(p.symbols());
        }
        if syms.len() > 1 {
            return None;
        }
        let symbol = syms.into_iter().next();
        let mut scale = BigInt::one();
        for p in polys {
            for (m, _) in p.terms() {
                for (_, e) in m.iter() {
                    if e.is_negative() {
                        return None;
                    }
                    scale = scale.lcm(e.denom());
                }
            }
        }
        Some(Self { symbol, scale })
    }

    pub(crate) fn to_dense(&self, p: &MPoly) -> Option<DensePoly> {
        let mut coeffs: Vec<GaussianRational> = Vec::new();
        for (m, c) in p.terms() {
            let e = match self.symbol {
                Some(s) => m.exponent(s),
                None => BigRational::zero(),
            };
            let k = (e * BigRational::from_integer(self.scale.clone())).to_integer().to_usize()?;
            if k > 100_000 {
                return None;
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, GaussianRational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(DensePoly(coeffs))
    }

    pub(crate) fn to_mpoly(&self, d: &DensePoly) -> MPoly {
        let mut r = MPoly::zero();
        for (k, c) in d.0.iter().enumerate() {
            let m = match self.symbol {
                Some(s) if k > 0 => Monomial::power(s, BigRational::new(BigInt::from(k), self.scale.clone())),
                _ => Monomial::one(),
            };
            r.add_term(m, c.clone());
        }
        r
    }
}
