//! Exponents: rational combinations of 1 and the declared irrational generators.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::scalar::gaussian::rational_to_string;
use crate::scalar::symbol::SymbolError;
use crate::scalar::{GaussianRational, MPoly, Monomial, RatInterval, RefineHint, Scalar, ScalarError, SymbolId, SymbolTable};

/// Default number of refinement levels tried before giving up on an order question.
pub const DEFAULT_PRECISION_BUDGET: u32 = 6;

/// Reads `PUISEUX_PRECISION_BUDGET`, falling back to the default.
pub fn precision_budget_from_env() -> u32 {
    std::env::var("PUISEUX_PRECISION_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_PRECISION_BUDGET)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExponentError {
    #[error("cannot order {0} against {1} within the precision budget")]
    OrderUndecidable(String, String),
}

/// `rational + sum c_j * mu_j`, exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Exponent {
    rational: BigRational,
    irr: Vec<(SymbolId, BigRational)>,
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl Exponent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(rational: BigRational) -> Self {
        Self { rational, irr: Vec::new() }
    }

    pub fn generator(id: SymbolId) -> Self {
        Self { rational: BigRational::zero(), irr: vec![(id, BigRational::one())] }
    }

    pub fn new(rational: BigRational, irr: impl IntoIterator<Item = (SymbolId, BigRational)>) -> Self {
        let mut v: Vec<(SymbolId, BigRational)> = Vec::new();
        for (id, c) in irr {
            match v.iter_mut().find(|(s, _)| *s == id) {
                Some((_, e)) => *e += c,
                None => v.push((id, c)),
            }
        }
        v.retain(|(_, c)| !c.is_zero());
        v.sort_by_key(|(s, _)| *s);
        Self { rational, irr: v }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn irr(&self) -> &[(SymbolId, BigRational)] {
        &self.irr
    }

    /// Coefficient of generator `id` (`[a]_{mu_j}`).
    pub fn coeff(&self, id: SymbolId) -> BigRational {
        self.irr
            .iter()
            .find(|(s, _)| *s == id)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irr.is_empty()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.irr.is_empty().then_some(&self.rational)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.rational + &o.rational, self.irr.iter().chain(o.irr.iter()).cloned())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            rational: -self.rational.clone(),
            irr: self.irr.iter().map(|(s, c)| (*s, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.rational * k, self.irr.iter().map(|(s, c)| (*s, c * k)))
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(BigInt::from(k)))
    }

    /// The degree-1 scalar `q0 + sum q_j t_j`.
    pub fn to_scalar(&self) -> Scalar {
        let mut p = MPoly::constant(GaussianRational::real(self.rational.clone()));
        for (s, c) in &self.irr {
            p = p.add(&MPoly::term(Monomial::var(*s), GaussianRational::real(c.clone())));
        }
        Scalar::from_poly(p)
    }

    /// Inverse of [`Exponent::to_scalar`] on linear scalars.
    pub fn from_scalar(s: &Scalar) -> Option<Self> {
        let (q0, coeffs) = s.as_linear()?;
        Some(Self::new(q0, coeffs))
    }

    pub fn enclosure(&self, table: &SymbolTable, level: u32) -> RatInterval {
        let mut acc = RatInterval::point(self.rational.clone());
        for (s, c) in &self.irr {
            acc = acc.add(&table.enclosure(*s, level).scale(c));
        }
        acc
    }

    /// Coordinate vector over `(1, generators...)`.
    pub fn coordinates(&self, generators: &[SymbolId]) -> Vec<BigRational> {
        std::iter::once(self.rational.clone())
            .chain(generators.iter().map(|g| self.coeff(*g)))
            .collect()
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> ExponentDisplay<'a> {
        ExponentDisplay { e: self, table }
    }

    pub fn to_string_with(&self, table: &SymbolTable) -> String {
        self.display(table).to_string()
    }

    /// True when the text form needs parentheses after `x^`.
    pub fn is_compound(&self) -> bool {
        match self.as_rational() {
            Some(q) => !(q.is_integer() && !q.is_negative()),
            None => self.irr.len() > 1 || !self.rational.is_zero() || !self.irr[0].1.is_one(),
        }
    }

    pub fn to_json(&self, table: &SymbolTable) -> Value {
        let irr: serde_json::Map<String, Value> = self
            .irr
            .iter()
            .map(|(s, c)| (table.name(*s).to_string(), Value::String(rational_to_string(c))))
            .collect();
        json!({ "rational": rational_to_string(&self.rational), "irr": irr })
    }
}

pub struct ExponentDisplay<'a> {
    e: &'a Exponent,
    table: &'a SymbolTable,
}

impl fmt::Display for ExponentDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.e.rational.is_zero() {
            parts.push((self.e.rational.is_negative(), rational_to_string(&self.e.rational.abs())));
        }
        for (s, c) in &self.e.irr {
            let name = self.table.name(*s);
            let mag = c.abs();
            let text = if mag.is_one() {
                name.to_string()
            } else if mag.is_integer() {
                format!("{}*{name}", mag.numer())
            } else if mag.numer().is_one() {
                format!("{name}/{}", mag.denom())
            } else {
                format!("{}*{name}/{}", mag.numer(), mag.denom())
            };
            parts.push((c.is_negative(), text));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        for (k, (neg, text)) in parts.iter().enumerate() {
            match (k, neg) {
                (0, true) => write!(f, "-{text}")?,
                (0, false) => write!(f, "{text}")?,
                (_, true) => write!(f, " - {text}")?,
                (_, false) => write!(f, " + {text}")?,
            }
        }
        Ok(())
    }
}

/// The symbol table together with the declared generators and the order budget.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentBasis {
    pub table: SymbolTable,
    generators: Vec<SymbolId>,
    budget: u32,
    q: Option<Scalar>,
    q_powers: Vec<(SymbolId, SymbolId)>,
}

impl Default for ExponentBasis {
    fn default() -> Self {
        Self::new(DEFAULT_PRECISION_BUDGET)
    }
}

impl ExponentBasis {
    pub fn new(budget: u32) -> Self {
        Self { table: SymbolTable::new(), generators: Vec::new(), budget, q: None, q_powers: Vec::new() }
    }

    /// Declares an additive symbol; it becomes the next generator.
    pub fn declare(&mut self, name: &str, enclosure: RatInterval, hint: Option<RefineHint>) -> Result<SymbolId, SymbolError> {
        let id = self.table.declare(name, enclosure, hint)?;
        self.generators.push(id);
        if let Some(q) = self.q.clone() {
            let qj = self.table.declare_power(&q, id)?;
            self.q_powers.push((id, qj));
        }
        Ok(id)
    }

    /// Fixes the q-difference base and registers `q^mu_j` for every generator.
    pub fn set_q(&mut self, q: Scalar) -> Result<(), SymbolError> {
        self.q_powers.clear();
        for g in self.generators.clone() {
            let qj = self.table.declare_power(&q, g)?;
            self.q_powers.push((g, qj));
        }
        self.q = Some(q);
        Ok(())
    }

    pub fn q(&self) -> Option<&Scalar> {
        self.q.as_ref()
    }

    pub fn generators(&self) -> &[SymbolId] {
        &self.generators
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn set_budget(&mut self, budget: u32) {
        self.budget = budget;
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.table.lookup(name)
    }

    /// The multiplicative symbol standing for `q^g`.
    pub fn q_power(&self, g: SymbolId) -> Option<SymbolId> {
        self.q_powers.iter().find(|(s, _)| *s == g).map(|(_, q)| *q)
    }

    /// `q^e` as a scalar: `q^{e_0} * prod (q^{mu_j})^{e_j}`.
    pub fn q_to_the(&self, q: &Scalar, e: &Exponent) -> Result<Scalar, ScalarError> {
        let mut acc = q.pow_rational(&e.rational)?;
        for (g, c) in &e.irr {
            let qj = self
                .q_power(*g)
                .ok_or_else(|| ScalarError::NotRepresentable(format!("q^{}", self.table.name(*g))))?;
            acc = acc.mul(&Scalar::from_fraction_monomial(GaussianRational::one(), Monomial::power(qj, c.clone())));
        }
        Ok(acc)
    }

    /// Certified comparison.  Equal exactly when the vectors coincide.
    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Result<Ordering, ExponentError> {
        if a.irr == b.irr {
            return Ok(a.rational.cmp(&b.rational));
        }
        let d = a.sub(b);
        for level in 0..=self.budget {
            let enc = d.enclosure(&self.table, level);
            if enc.is_positive() {
                return Ok(Ordering::Greater);
            }
            if enc.is_negative() {
                return Ok(Ordering::Less);
            }
        }
        Err(ExponentError::OrderUndecidable(a.to_string_with(&self.table), b.to_string_with(&self.table)))
    }

    pub fn lt(&self, a: &Exponent, b: &Exponent) -> Result<bool, ExponentError> {
        Ok(self.compare(a, b)? == Ordering::Less)
    }

    pub fn max<'a>(&self, a: &'a Exponent, b: &'a Exponent) -> Result<&'a Exponent, ExponentError> {
        Ok(if self.compare(a, b)? == Ordering::Less { b } else { a })
    }

    pub fn min<'a>(&self, a: &'a Exponent, b: &'a Exponent) -> Result<&'a Exponent, ExponentError> {
        Ok(if self.compare(a, b)? == Ordering::Greater { b } else { a })
    }

    /// Sorts ascending with certified comparisons.
    pub fn sort(&self, v: &mut [Exponent]) -> Result<(), ExponentError> {
        let mut err = None;
        v.sort_by(|a, b| match self.compare(a, b) {
            Ok(o) => o,
            Err(e) => {
                err.get_or_insert(e);
                Ordering::Equal
            }
        });
        err.map_or(Ok(()), Err)
    }

    pub fn rank(&self, v: &[Exponent]) -> usize {
        rational_rank(v, &self.generators)
    }

    /// `dim span(num u den) - dim span(den)`.
    pub fn rational_rank_quotient(&self, num: &[Exponent], den: &[Exponent]) -> usize {
        let all: Vec<Exponent> = num.iter().chain(den.iter()).cloned().collect();
        self.rank(&all) - self.rank(den)
    }
}

/// Rank over `Q` of the coordinate vectors of `v`.
pub fn rational_rank(v: &[Exponent], generators: &[SymbolId]) -> usize {
    let mut gens: Vec<SymbolId> = generators.to_vec();
    for e in v {
        for (s, _) in &e.irr {
            if !gens.contains(s) {
                gens.push(*s);
            }
        }
    }
    let rows: Vec<Vec<BigRational>> = v.iter().map(|e| e.coordinates(&gens)).collect();
    matrix_rank(rows)
}

#[allow(clippy::needless_range_loop)]
fn matrix_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] / &pivot;
                for c in col..ncols {
                    let v = &rows[rank][c] * &f;
                    rows[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Coordinates of `a` in the `Q`-basis `basis` of the exponent space, if `a` lies in its span.
///
/// Used for derivations relative to a decomposition of the group other than
/// the declared generators, e.g. `Gamma = pi*Z` with generators `2` and `e`.
#[allow(clippy::needless_range_loop)]
pub fn coordinates_in(basis: &[Exponent], a: &Exponent) -> Option<Vec<BigRational>> {
    let mut gens: Vec<SymbolId> = Vec::new();
    for e in basis.iter().chain(std::iter::once(a)) {
        for (s, _) in &e.irr {
            if !gens.contains(s) {
                gens.push(*s);
            }
        }
    }
    let n = basis.len();
    let dim = gens.len() + 1;
    // augmented system: columns are basis vectors, rows are coordinates
    let mut m: Vec<Vec<BigRational>> = (0..dim)
        .map(|row| {
            let mut r: Vec<BigRational> = basis.iter().map(|b| b.coordinates(&gens)[row].clone()).collect();
            r.push(a.coordinates(&gens)[row].clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..dim).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        for c in 0..=n {
            m[rank][c] = &m[rank][c] / &pivot;
        }
        for r in 0..dim {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let v = &m[rank][c] * &f;
                    m[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if (rank..dim).any(|r| !m[r][n].is_zero()) {
        return None;
    }
    let mut out = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        out[c] = m[r][n].clone();
    }
    Some(out)
}
