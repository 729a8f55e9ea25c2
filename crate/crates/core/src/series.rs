//! Finite generalized power series with a truncation watermark.

use std::collections::HashMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exponent::{coordinates_in, Exponent, ExponentBasis};
use crate::scalar::{Scalar, SymbolId, SymbolTable};

/// How `y_k` acts on `x^mu`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    /// `d/dx`
    OrdinaryDx,
    /// `x d/dx`
    Euler,
    /// `s(x) -> s(q x)`
    QDifference(Scalar),
}

impl OperatorKind {
    /// Exponent shift per application.
    pub fn epsilon(&self) -> i64 {
        match self {
            OperatorKind::OrdinaryDx => 1,
            _ => 0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::OrdinaryDx => "dx",
            OperatorKind::Euler => "euler",
            OperatorKind::QDifference(_) => "qdiff",
        }
    }

    /// `<mu>_kappa`.
    pub fn bracket(&self, mu: &Exponent, kappa: usize, basis: &ExponentBasis) -> Result<Scalar> {
        if kappa == 0 {
            return Ok(Scalar::one());
        }
        match self {
            OperatorKind::OrdinaryDx => {
                let m = mu.to_scalar();
                Ok((0..kappa).fold(Scalar::one(), |acc, i| acc.mul(&m.sub(&Scalar::from_int(i as i64)))))
            }
            OperatorKind::Euler => Ok(mu.to_scalar().pow_int(kappa as i64)?),
            OperatorKind::QDifference(q) => Ok(basis.q_to_the(q, &mu.scale_int(kappa as i64))?),
        }
    }

    /// Certified comparison of `|q|` with 1; `None` for the differential kinds or when undecided.
    pub fn q_modulus_vs_one(&self, basis: &ExponentBasis) -> Option<std::cmp::Ordering> {
        let OperatorKind::QDifference(q) = self else { return None };
        let one = num_rational::BigRational::from_integer(1.into());
        for level in 0..=basis.budget() {
            let Ok(e) = q.eval_enclosure(&basis.table, level) else { continue };
            let n = e.norm();
            if n.lo > one {
                return Some(std::cmp::Ordering::Greater);
            }
            if n.hi < one {
                return Some(std::cmp::Ordering::Less);
            }
        }
        None
    }

    /// `<mu>` as it enters the characteristic polynomial: `mu` or `q^mu`.
    pub fn bracket_one(&self, mu: &Exponent, basis: &ExponentBasis) -> Result<Scalar> {
        match self {
            OperatorKind::QDifference(q) => Ok(basis.q_to_the(q, mu)?),
            _ => Ok(mu.to_scalar()),
        }
    }
}

/// `sum c_i x^{e_i}`, exponents strictly increasing, every exponent below `valid_to`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GenSeries {
    terms: Vec<(Exponent, Scalar)>,
    valid_to: Option<Exponent>,
}

impl GenSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Scalar, e: Exponent) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: vec![(e, c)], valid_to: None }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::monomial(c, Exponent::zero())
    }

    /// Sorts, merges equal exponents and drops zeros.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, Scalar)>, basis: &ExponentBasis) -> Result<Self> {
        let mut acc: HashMap<Exponent, Scalar> = HashMap::new();
        let mut order: Vec<Exponent> = Vec::new();
        for (e, c) in terms {
            match acc.get_mut(&e) {
                Some(v) => *v = v.add(&c),
                None => {
                    order.push(e.clone());
                    acc.insert(e, c);
                }
            }
        }
        order.retain(|e| !acc[e].is_zero());
        basis.sort(&mut order)?;
        let terms = order
            .into_iter()
            .map(|e| {
                let c = acc.remove(&e).expect("present");
                (e, c)
            })
            .collect();
        Ok(Self { terms, valid_to: None })
    }

    /// Truncated series `self + O(x^w)`.
    pub fn with_valid_to(mut self, w: Option<Exponent>, basis: &ExponentBasis) -> Result<Self> {
        let w = match (w, self.valid_to.take()) {
            (None, old) => old,
            (Some(a), None) => Some(a),
            (Some(a), Some(b)) => Some(basis.min(&a, &b)?.clone()),
        };
        if let Some(w) = &w {
            let mut kept = Vec::with_capacity(self.terms.len());
            for t in self.terms {
                if basis.lt(&t.0, w)? {
                    kept.push(t);
                }
            }
            self.terms = kept;
        }
        self.valid_to = w;
        Ok(self)
    }

    pub fn terms(&self) -> &[(Exponent, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Exponent, Scalar)> {
        self.terms
    }

    pub fn valid_to(&self) -> Option<&Exponent> {
        self.valid_to.as_ref()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// No known nonzero terms (the series may still be truncated).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exactly zero, with no truncation.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.valid_to.is_none()
    }

    pub fn ord(&self) -> Result<&Exponent> {
        self.terms.first().map(|(e, _)| e).ok_or(Error::OrdOfZero)
    }

    pub fn leading(&self) -> Option<&(Exponent, Scalar)> {
        self.terms.first()
    }

    pub fn last(&self) -> Option<&(Exponent, Scalar)> {
        self.terms.last()
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.terms.iter().map(|(e, _)| e.clone()).collect()
    }

    pub fn coeff_at(&self, e: &Exponent) -> Scalar {
        self.terms
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, o: &Self, basis: &ExponentBasis) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &o.terms[j];
            match basis.compare(ea, eb)? {
                std::cmp::Ordering::Less => {
                    out.push((ea.clone(), ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((eb.clone(), cb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = ca.add(cb);
                    if !s.is_zero() {
                        out.push((ea.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        let r = Self { terms: out, valid_to: None };
        let w = min_opt(self.valid_to.as_ref(), o.valid_to.as_ref(), basis)?;
        r.with_valid_to(w, basis)
    }

    pub fn sub(&self, o: &Self, basis: &ExponentBasis) -> Result<Self> {
        self.add(&o.neg(), basis)
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(), valid_to: self.valid_to.clone() }
    }

    pub fn scale(&self, k: &Scalar) -> Self {
        if k.is_zero() {
            return Self { terms: Vec::new(), valid_to: self.valid_to.clone() };
        }
        Self { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.mul(k))).collect(), valid_to: self.valid_to.clone() }
    }

    /// Multiplication by `c x^e`; order is preserved so no comparisons are needed.
    pub fn mul_monomial(&self, c: &Scalar, e: &Exponent) -> Self {
        if c.is_zero() {
            return Self { terms: Vec::new(), valid_to: self.valid_to.as_ref().map(|w| w.add(e)) };
        }
        Self {
            terms: self.terms.iter().map(|(x, k)| (x.add(e), k.mul(c))).collect(),
            valid_to: self.valid_to.as_ref().map(|w| w.add(e)),
        }
    }

    pub fn mul(&self, o: &Self, basis: &ExponentBasis) -> Result<Self> {
        if self.terms.len() == 1 && self.valid_to.is_none() {
            let (e, c) = &self.terms[0];
            return Ok(o.mul_monomial(c, e));
        }
        if o.terms.len() == 1 && o.valid_to.is_none() {
            let (e, c) = &o.terms[0];
            return Ok(self.mul_monomial(c, e));
        }
        let products = self
            .terms
            .iter()
            .flat_map(|(ea, ca)| o.terms.iter().map(move |(eb, cb)| (ea.add(eb), ca.mul(cb))));
        let r = Self::from_terms(products, basis)?;
        // valid_to(ab) = min(valid_to(a) + ord(b), valid_to(b) + ord(a))
        let wa = self.valid_to.as_ref().map(|w| match o.terms.first() {
            Some((e, _)) => w.add(e),
            None => o.valid_to.as_ref().map_or_else(|| w.clone(), |v| w.add(v)),
        });
        let wb = o.valid_to.as_ref().map(|w| match self.terms.first() {
            Some((e, _)) => w.add(e),
            None => self.valid_to.as_ref().map_or_else(|| w.clone(), |v| w.add(v)),
        });
        let w = min_opt(wa.as_ref(), wb.as_ref(), basis)?;
        r.with_valid_to(w, basis)
    }

    pub fn pow(&self, k: u32, basis: &ExponentBasis) -> Result<Self> {
        let mut acc = Self::constant(Scalar::one());
        for _ in 0..k {
            acc = acc.mul(self, basis)?;
        }
        Ok(acc)
    }

    /// `s^(kappa)`: each `c x^mu` becomes `c <mu>_kappa x^(mu - eps kappa)`.
    pub fn apply_operator(&self, op: &OperatorKind, kappa: usize, basis: &ExponentBasis) -> Result<Self> {
        if kappa == 0 {
            return Ok(self.clone());
        }
        let shift = Exponent::from_int(-op.epsilon() * kappa as i64);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let f = op.bracket(e, kappa, basis)?;
            let v = c.mul(&f);
            if !v.is_zero() {
                terms.push((e.add(&shift), v));
            }
        }
        Ok(Self { terms, valid_to: self.valid_to.as_ref().map(|w| w.add(&shift)) })
    }

    /// `D_j`: multiplies the coefficient of `x^a` by the coordinate `[a]_{mu_j}`.
    pub fn formal_derivation(&self, j: SymbolId) -> Self {
        self.map_coordinate(|e| Some(e.coeff(j))).expect("coordinate always defined")
    }

    /// `D_j` relative to an explicit `Q`-basis (`basis[j]` plays `mu_j`).
    pub fn formal_derivation_in(&self, qbasis: &[Exponent], j: usize) -> Option<Self> {
        self.map_coordinate(|e| coordinates_in(qbasis, e).map(|v| v[j].clone()))
    }

    fn map_coordinate(&self, f: impl Fn(&Exponent) -> Option<num_rational::BigRational>) -> Option<Self> {
        let mut terms = Vec::new();
        for (e, c) in &self.terms {
            let k = f(e)?;
            let v = c.mul(&Scalar::from_rational(k));
            if !v.is_zero() {
                terms.push((e.clone(), v));
            }
        }
        Some(Self { terms, valid_to: self.valid_to.clone() })
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> SeriesDisplay<'a> {
        SeriesDisplay { s: self, table }
    }

    pub fn to_string_with(&self, table: &SymbolTable) -> String {
        self.display(table).to_string()
    }

    pub fn to_json(&self, table: &SymbolTable) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                json!({
                    "exp": e.to_json(table),
                    "exp_text": e.to_string_with(table),
                    "coeff": c.to_string_with(table),
                })
            })
            .collect();
        json!({
            "terms": terms,
            "valid_to": self.valid_to.as_ref().map(|w| w.to_json(table)),
        })
    }
}

fn min_opt(a: Option<&Exponent>, b: Option<&Exponent>, basis: &ExponentBasis) -> Result<Option<Exponent>> {
    Ok(match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(basis.min(x, y)?.clone()),
    })
}

/// `x`, `x^2`, `x^(3/2)`, `x^(4 + tau)`; empty for exponent zero.
pub fn xpow(e: &Exponent, table: &SymbolTable) -> String {
    if e.is_zero() {
        return String::new();
    }
    if e.as_rational().is_some_and(num_traits::One::is_one) {
        return "x".into();
    }
    if e.is_compound() {
        format!("x^({})", e.display(table))
    } else {
        format!("x^{}", e.display(table))
    }
}

/// One term `c*x^e` with its sign split off.
pub(crate) fn term_text(c: &Scalar, e: &Exponent, table: &SymbolTable) -> (bool, String) {
    let xp = xpow(e, table);
    let (neg, mag) = match c.as_rational() {
        Some(q) if num_traits::Signed::is_negative(&q) => (true, c.neg()),
        _ => (false, c.clone()),
    };
    let text = if xp.is_empty() {
        if mag.is_compound() && !mag.as_gaussian().is_some_and(|g| g.is_real()) {
            format!("({})", mag.display(table))
        } else {
            mag.display(table).to_string()
        }
    } else if mag.is_one() {
        xp
    } else if mag.is_compound() {
        format!("({})*{xp}", mag.display(table))
    } else {
        format!("{}*{xp}", mag.display(table))
    };
    (neg, text)
}

pub struct SeriesDisplay<'a> {
    s: &'a GenSeries,
    table: &'a SymbolTable,
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.s.terms {
            let (neg, text) = term_text(c, e, self.table);
            match (first, neg) {
                (true, true) => write!(f, "-{text}")?,
                (true, false) => write!(f, "{text}")?,
                (false, true) => write!(f, " - {text}")?,
                (false, false) => write!(f, " + {text}")?,
            }
            first = false;
        }
        if let Some(w) = &self.s.valid_to {
            let o = format!("O({})", if w.is_zero() { "1".to_string() } else { xpow(w, self.table) });
            if first {
                write!(f, "{o}")?;
            } else {
                write!(f, " + {o}")?;
            }
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{RatInterval, RefineHint};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn setup() -> (ExponentBasis, SymbolId) {
        let mut b = ExponentBasis::new(6);
        let id = b
            .declare("tau", RatInterval::new(r(1570796, 1_000_000), r(1570797, 1_000_000)), Some(RefineHint::PiMultiple(r(1, 2))))
            .unwrap();
        (b, id)
    }

    #[test]
    fn arithmetic() {
        let (b, tau) = setup();
        let x = GenSeries::monomial(Scalar::one(), Exponent::from_int(1));
        let xt = GenSeries::monomial(Scalar::one(), Exponent::generator(tau));
        let s = x.add(&xt, &b).unwrap();
        assert_eq!(s.add(&xt.neg(), &b).unwrap(), x);
        assert_eq!(s.ord().unwrap(), &Exponent::from_int(1));
        let ts = s.scale(&Scalar::symbol(tau));
        assert_eq!(ts.to_string_with(&b.table), "tau*x + tau*x^tau");
    }

    #[test]
    fn operators() {
        let (b, tau) = setup();
        let s = GenSeries::from_terms(
            [(Exponent::from_int(1), Scalar::one()), (Exponent::generator(tau), Scalar::one())],
            &b,
        )
        .unwrap();
        let e1 = s.apply_operator(&OperatorKind::Euler, 1, &b).unwrap();
        assert_eq!(e1.coeff_at(&Exponent::generator(tau)), Scalar::symbol(tau));
        let h = GenSeries::monomial(Scalar::one(), Exponent::from_ratio(3, 2));
        let d = h.apply_operator(&OperatorKind::OrdinaryDx, 1, &b).unwrap();
        assert_eq!(d.terms(), &[(Exponent::from_ratio(1, 2), Scalar::from_ratio(3, 2))]);
        assert_eq!(GenSeries::zero().ord(), Err(Error::OrdOfZero));
    }

    #[test]
    fn q_powers() {
        let (mut b, tau) = setup();
        b.set_q(Scalar::from_int(2)).unwrap();
        let q = OperatorKind::QDifference(Scalar::from_int(2));
        let s = GenSeries::monomial(Scalar::one(), Exponent::generator(tau));
        let s2 = s.apply_operator(&q, 2, &b).unwrap();
        assert_eq!(s2.to_string_with(&b.table), "[2^tau]^2*x^tau");
        let once = s.apply_operator(&q, 1, &b).unwrap().apply_operator(&q, 1, &b).unwrap();
        assert_eq!(once, s2);
    }

    #[test]
    fn derivations() {
        let mut b = ExponentBasis::new(6);
        let pi = b.declare("pi", RatInterval::new(r(314159, 100000), r(314160, 100000)), Some(RefineHint::PiMultiple(r(1, 1)))).unwrap();
        let e = Exponent::from_int(2).add(&Exponent::generator(pi).scale_int(3));
        let s = GenSeries::monomial(Scalar::one(), e.clone());
        assert_eq!(s.formal_derivation(pi), GenSeries::monomial(Scalar::from_int(3), e));
        let five = GenSeries::monomial(Scalar::one(), Exponent::from_int(5));
        assert!(five.formal_derivation(pi).is_zero());
    }
}
