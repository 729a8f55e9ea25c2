//! Coefficient field: `Q(i)` extended by free transcendental symbols.

pub mod gaussian;
pub mod interval;
pub mod poly;
pub mod roots;
pub mod symbol;

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use gaussian::GaussianRational;
pub use interval::{ComplexInterval, RatInterval};
pub use poly::{MPoly, Monomial};
pub use symbol::{RefineHint, SymbolId, SymbolKind, SymbolTable, TranscSymbol};

use poly::UniView;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("enclosure too wide to separate the denominator from zero")]
    EnclosureTooWide,
    #[error("value not representable: {0}")]
    NotRepresentable(String),
}

/// Quotient of two polynomials in the free symbols, kept normalized.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: MPoly,
    den: MPoly,
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<GaussianRational> for Scalar {
    fn from(c: GaussianRational) -> Self {
        Self::from_gaussian(c)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Self { num: MPoly::zero(), den: MPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gaussian(GaussianRational::from_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_gaussian(GaussianRational::from_ratio(n, d))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_gaussian(GaussianRational::real(q))
    }

    pub fn from_gaussian(c: GaussianRational) -> Self {
        Self { num: MPoly::constant(c), den: MPoly::one() }
    }

    pub fn i() -> Self {
        Self::from_gaussian(GaussianRational::i())
    }

    pub fn symbol(id: SymbolId) -> Self {
        Self::from_poly(MPoly::var(id))
    }

    pub fn monomial(c: GaussianRational, m: Monomial) -> Self {
        Self::from_fraction(MPoly::term(m, c), MPoly::one()).expect("nonzero denominator")
    }

    pub fn from_poly(p: MPoly) -> Self {
        Self::from_fraction(p, MPoly::one()).expect("nonzero denominator")
    }

    pub fn from_fraction(num: MPoly, den: MPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self { num, den }.normalized())
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// Reapplies the canonical form; idempotent.
    pub fn normalized(self) -> Self {
        let Self { mut num, mut den } = self;
        if num.is_zero() {
            return Self::zero();
        }
        shift_min_zero(&mut num, &mut den);
        if den.as_constant().is_none() {
            if let Some(view) = UniView::for_polys(&[&num, &den]) {
                if let (Some(a), Some(b)) = (view.to_dense(&num), view.to_dense(&den)) {
                    let g = a.gcd(&b);
                    if g.0.len() > 1 {
                        let (qa, _) = a.div_rem(&g);
                        let (qb, _) = b.div_rem(&g);
                        num = view.to_mpoly(&qa);
                        den = view.to_mpoly(&qb);
                        shift_min_zero(&mut num, &mut den);
                    }
                }
            } else if let Some(q) = num.div_exact(&den) {
                num = q;
                den = MPoly::one();
            }
        }
        let c = den.trailing().map(|(_, c)| c.clone()).expect("nonzero denominator");
        if !c.is_one() {
            let inv = c.inv().expect("nonzero coefficient");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Self { num, den }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self { num: self.num.add(&o.num), den: self.den.clone() }.normalized();
        }
        Self {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .normalized()
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some(c) = o.as_gaussian() {
            return Self { num: self.num.scale(&c), den: self.den.clone() };
        }
        if let Some(c) = self.as_gaussian() {
            return Self { num: o.num.scale(&c), den: o.den.clone() };
        }
        Self { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        Self::from_fraction(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        if o.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow_int(&self, e: i64) -> Result<Self, ScalarError> {
        if e == 0 {
            return Ok(Self::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(e.unsigned_abs())
            .map_err(|_| ScalarError::NotRepresentable("exponent too large".into()))?;
        Ok(Self { num: base.num.pow(k), den: base.den.pow(k) }.normalized())
    }

    /// `self^e` for rational `e`, when the result stays in the field.
    pub fn pow_rational(&self, e: &BigRational) -> Result<Self, ScalarError> {
        if e.is_integer() {
            let k = e
                .to_integer()
                .to_i64()
                .ok_or_else(|| ScalarError::NotRepresentable("exponent too large".into()))?;
            return self.pow_int(k);
        }
        let (c, m) = self
            .as_monomial()
            .ok_or_else(|| ScalarError::NotRepresentable(format!("non-monomial base to power {e}")))?;
        if !c.is_real() || c.re.is_negative() {
            return Err(ScalarError::NotRepresentable(format!("power {e} of a non-positive coefficient")));
        }
        let q = e.denom().to_u32().ok_or_else(|| ScalarError::NotRepresentable("exponent too large".into()))?;
        let root = gaussian::rational_nth_root(&c.re, q)
            .ok_or_else(|| ScalarError::NotRepresentable(format!("{}^({e})", gaussian::rational_to_string(&c.re))))?;
        let p = e.numer().to_i64().ok_or_else(|| ScalarError::NotRepresentable("exponent too large".into()))?;
        let coeff = GaussianRational::real(root).pow(p).ok_or(ScalarError::DivisionByZero)?;
        Ok(Self::from_fraction_monomial(coeff, m.pow(e)))
    }

    /// Builds `c * m` where `m` may carry negative exponents.
    pub fn from_fraction_monomial(c: GaussianRational, m: Monomial) -> Self {
        let pos = Monomial::from_pairs(m.iter().filter(|(_, e)| e.is_positive()).cloned());
        let neg = Monomial::from_pairs(m.iter().filter(|(_, e)| e.is_negative()).map(|(s, e)| (*s, -e.clone())));
        Self::from_fraction(MPoly::term(pos, c), MPoly::term(neg, GaussianRational::one()))
            .expect("nonzero denominator")
    }

    pub fn as_gaussian(&self) -> Option<GaussianRational> {
        let d = self.den.as_constant()?;
        let n = self.num.as_constant()?;
        Some(&n / &d)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        let g = self.as_gaussian()?;
        g.is_real().then_some(g.re)
    }

    /// `(c, m)` with `self = c * m`; `m` may have negative exponents.
    pub fn as_monomial(&self) -> Option<(GaussianRational, Monomial)> {
        if self.num.len() != 1 || self.den.len() != 1 {
            return None;
        }
        let (nm, nc) = self.num.leading()?;
        let (dm, dc) = self.den.leading()?;
        Some((nc / dc, nm.div(dm)))
    }

    /// Coordinates `(q0, [(s, q_s)])` when `self = q0 + sum q_s * s` with rational `q`s.
    pub fn as_linear(&self) -> Option<(BigRational, Vec<(SymbolId, BigRational)>)> {
        let d = self.den.as_constant()?;
        if !d.is_real() {
            return None;
        }
        let mut q0 = BigRational::zero();
        let mut coeffs = Vec::new();
        for (m, c) in self.num.terms() {
            if !c.is_real() {
                return None;
            }
            let v = &c.re / &d.re;
            let pairs: Vec<_> = m.iter().collect();
            match pairs.as_slice() {
                [] => q0 = v,
                [(s, e)] if e.is_one() => coeffs.push((*s, v)),
                _ => return None,
            }
        }
        Some((q0, coeffs))
    }

    pub fn symbols(&self) -> BTreeSet<SymbolId> {
        let mut s = self.num.symbols();
        s.extend(self.den.symbols());
        s
    }

    /// Enclosure at one refinement level.
    pub fn eval_enclosure(&self, table: &SymbolTable, level: u32) -> Result<ComplexInterval, ScalarError> {
        let n = self.num.eval_enclosure(table, level).ok_or(ScalarError::EnclosureTooWide)?;
        let d = self.den.eval_enclosure(table, level).ok_or(ScalarError::EnclosureTooWide)?;
        n.div(&d).ok_or(ScalarError::EnclosureTooWide)
    }

    /// Enclosure at the first level in `0..=precision` whose denominator excludes zero.
    pub fn enclosure(&self, table: &SymbolTable, precision: u32) -> Result<ComplexInterval, ScalarError> {
        for level in 0..=precision {
            if let Ok(e) = self.eval_enclosure(table, level) {
                return Ok(e);
            }
        }
        Err(ScalarError::EnclosureTooWide)
    }

    /// Certified sign of a real scalar; `None` if undecided within the budget
    /// or if the value is not certified real.
    pub fn real_sign(&self, table: &SymbolTable, budget: u32) -> Option<Ordering> {
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        for level in 0..=budget {
            let Ok(e) = self.eval_enclosure(table, level) else { continue };
            if !e.im.contains_zero() {
                return None;
            }
            if e.re.is_positive() {
                return Some(Ordering::Greater);
            }
            if e.re.is_negative() {
                return Some(Ordering::Less);
            }
        }
        None
    }

    /// Exact value at a rational point.
    pub fn eval_at(&self, point: &HashMap<SymbolId, BigRational>) -> Option<GaussianRational> {
        let n = self.num.eval_at(point)?;
        let d = self.den.eval_at(point)?;
        (!d.is_zero()).then(|| &n / &d)
    }

    pub fn to_string_with(&self, table: &SymbolTable) -> String {
        self.display(table).to_string()
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> ScalarDisplay<'a> {
        ScalarDisplay { s: self, table }
    }

    /// True when rendering as a factor needs surrounding parentheses.
    pub fn is_compound(&self) -> bool {
        if self.den.as_constant().is_none() || self.num.len() > 1 {
            return true;
        }
        match self.as_gaussian() {
            Some(c) => !c.is_real() || !c.re.is_integer() || c.re.is_negative(),
            None => {
                let (_, c) = self.num.leading().expect("nonzero");
                !(c.is_real() && c.re.is_positive() && self.den.as_constant().is_some_and(|d| d.is_one()))
            }
        }
    }
}

fn shift_min_zero(num: &mut MPoly, den: &mut MPoly) {
    let mut syms = num.symbols();
    syms.extend(den.symbols());
    let shift = Monomial::from_pairs(syms.into_iter().filter_map(|s| {
        let m = std::cmp::min(num.min_exponent(s), den.min_exponent(s));
        (!m.is_zero()).then(|| (s, -m))
    }));
    if !shift.is_one() {
        *num = num.mul_monomial(&shift);
        *den = den.mul_monomial(&shift);
    }
}

pub struct ScalarDisplay<'a> {
    s: &'a Scalar,
    table: &'a SymbolTable,
}

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = display_form(self.s);
        if den == MPoly::one() {
            return write_poly(f, &num, self.table);
        }
        if num.len() > 1 {
            write!(f, "(")?;
            write_poly(f, &num, self.table)?;
            write!(f, ")")?;
        } else {
            write_poly(f, &num, self.table)?;
        }
        write!(f, "/(")?;
        write_poly(f, &den, self.table)?;
        write!(f, ")")
    }
}

/// Integral, primitive numerator and denominator with positive leading denominator coefficient.
fn display_form(s: &Scalar) -> (MPoly, MPoly) {
    if let Some(c) = s.as_gaussian() {
        return (MPoly::constant(c), MPoly::one());
    }
    let l = s.num.denom_lcm().lcm(&s.den.denom_lcm());
    let k = GaussianRational::real(BigRational::from_integer(l));
    let (mut num, mut den) = (s.num.scale(&k), s.den.scale(&k));
    let g = num.numer_gcd().gcd(&den.numer_gcd());
    let mut factor = BigRational::new(BigInt::one(), g);
    let (_, lead) = den.leading().expect("nonzero");
    if lead.re.is_negative() || (lead.re.is_zero() && lead.im.is_negative()) {
        factor = -factor;
    }
    let fk = GaussianRational::real(factor);
    num = num.scale(&fk);
    den = den.scale(&fk);
    if let Some(d) = den.as_constant() {
        let inv = d.inv().expect("nonzero");
        return (num.scale(&inv), MPoly::one());
    }
    (num, den)
}

pub(crate) fn symbol_label(table: &SymbolTable, id: SymbolId) -> String {
    let sym = table.get(id);
    match sym.kind {
        SymbolKind::Additive => sym.name.clone(),
        SymbolKind::Multiplicative { .. } => format!("[{}]", sym.name),
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, m: &Monomial, table: &SymbolTable) -> fmt::Result {
    for (k, (id, e)) in m.iter().enumerate() {
        if k > 0 {
            write!(f, "*")?;
        }
        write!(f, "{}", symbol_label(table, *id))?;
        if e.is_one() {
            continue;
        }
        if e.is_integer() && e.is_positive() {
            write!(f, "^{}", e.numer())?;
        } else {
            write!(f, "^({})", gaussian::rational_to_string(e))?;
        }
    }
    Ok(())
}

/// Writes terms in descending monomial order, e.g. `tau^2 - 8*tau + 16`.
fn write_poly(f: &mut fmt::Formatter<'_>, p: &MPoly, table: &SymbolTable) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_real() && c.re.is_negative() || c.re.is_zero() && c.im.is_negative();
        let mag = if negative { -c } else { c.clone() };
        match (k, negative) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if m.is_one() {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write_monomial(f, m, table)?;
        }
    }
    Ok(())
}
