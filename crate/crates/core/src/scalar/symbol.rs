//! Free transcendental symbols and the table that owns them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::interval::{e_enclosure, pi_enclosure, rational_from_f64, RatInterval};
use super::Scalar;

/// Index of a symbol inside its [`SymbolTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

/// Known value attached to a symbol, used to tighten its enclosure on demand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefineHint {
    /// The symbol equals `factor * pi`.
    PiMultiple(BigRational),
    /// The symbol equals `factor * e`.
    EMultiple(BigRational),
    /// Leading decimal digits of the value, e.g. `1.5707963267948966`.
    Digits(String),
}

impl fmt::Display for RefineHint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, k) = match self {
            RefineHint::PiMultiple(k) => ("pi", k),
            RefineHint::EMultiple(k) => ("e", k),
            RefineHint::Digits(d) => return write!(f, "{d}"),
        };
        let one = BigRational::from_integer(1.into());
        if *k == one {
            write!(f, "{name}")
        } else if k.numer() == &BigInt::from(1) {
            write!(f, "{name}/{}", k.denom())
        } else if k.is_integer() {
            write!(f, "{}*{name}", k.numer())
        } else {
            write!(f, "{}*{name}/{}", k.numer(), k.denom())
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolKind {
    /// User-declared constant; may appear in coefficients and exponents.
    Additive,
    /// `base^generator`, created for q-difference operators.
    Multiplicative { base: Box<Scalar>, generator: SymbolId },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TranscSymbol {
    pub name: String,
    pub enclosure: RatInterval,
    pub hint: Option<RefineHint>,
    pub kind: SymbolKind,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("symbol `{0}` is already declared")]
    Duplicate(String),
    #[error("enclosure of `{0}` must satisfy lo < hi")]
    EmptyEnclosure(String),
    #[error("refinement hint for `{0}` lies outside its declared enclosure")]
    InconsistentHint(String),
    #[error("enclosure of `{0}` must exclude 0")]
    ZeroInEnclosure(String),
}

/// Owns every symbol a problem refers to.  Scalars store [`SymbolId`]s into it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolTable {
    symbols: Vec<TranscSymbol>,
}

/// Extra decimal digits requested per refinement level.
fn digits_for_level(level: u32) -> u32 {
    10 * (1u32 << level.min(12))
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn declare(
        &mut self,
        name: &str,
        enclosure: RatInterval,
        hint: Option<RefineHint>,
    ) -> Result<SymbolId, SymbolError> {
        if self.lookup(name).is_some() {
            return Err(SymbolError::Duplicate(name.to_string()));
        }
        if enclosure.lo >= enclosure.hi {
            return Err(SymbolError::EmptyEnclosure(name.to_string()));
        }
        if let Some(h) = &hint {
            let tight = hint_enclosure(h, digits_for_level(1));
            if tight.intersect(&enclosure).is_none() {
                return Err(SymbolError::InconsistentHint(name.to_string()));
            }
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.symbols.push(TranscSymbol {
            name: name.to_string(),
            enclosure,
            hint,
            kind: SymbolKind::Additive,
        });
        Ok(id)
    }

    /// Registers the symbol standing for `base^generator`.
    pub fn declare_power(&mut self, base: &Scalar, generator: SymbolId) -> Result<SymbolId, SymbolError> {
        let name = format!("{}^{}", base.display(self), self.get(generator).name);
        if let Some(id) = self.lookup(&name) {
            return Ok(id);
        }
        let id = SymbolId(self.symbols.len() as u32);
        let kind = SymbolKind::Multiplicative { base: Box::new(base.clone()), generator };
        let mut sym = TranscSymbol {
            name: name.clone(),
            enclosure: RatInterval::new(BigRational::zero(), BigRational::from_integer(1.into())),
            hint: None,
            kind,
        };
        self.symbols.push(sym.clone());
        match self.power_enclosure(id, 0) {
            Some(enc) => {
                sym.enclosure = enc;
                self.symbols[id.0 as usize] = sym;
                Ok(id)
            }
            None => {
                self.symbols.pop();
                Err(SymbolError::ZeroInEnclosure(name))
            }
        }
    }

    pub fn get(&self, id: SymbolId) -> &TranscSymbol {
        &self.symbols[id.0 as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s.name == name).map(|i| SymbolId(i as u32))
    }

    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &TranscSymbol)> {
        self.symbols.iter().enumerate().map(|(i, s)| (SymbolId(i as u32), s))
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.get(id).name
    }

    /// Enclosure of symbol `id` after `level` refinement steps.
    ///
    /// Level 0 is the declared enclosure.  Symbols without a hint never
    /// tighten beyond it.
    pub fn enclosure(&self, id: SymbolId, level: u32) -> RatInterval {
        let sym = self.get(id);
        if level == 0 {
            return sym.enclosure.clone();
        }
        match &sym.kind {
            SymbolKind::Additive => match &sym.hint {
                Some(h) => hint_enclosure(h, digits_for_level(level))
                    .intersect(&sym.enclosure)
                    .unwrap_or_else(|| sym.enclosure.clone()),
                None => sym.enclosure.clone(),
            },
            SymbolKind::Multiplicative { .. } => self
                .power_enclosure(id, level)
                .and_then(|e| e.intersect(&sym.enclosure))
                .unwrap_or_else(|| sym.enclosure.clone()),
        }
    }

    /// `base^g` over the corner values; valid for real positive bases.
    fn power_enclosure(&self, id: SymbolId, level: u32) -> Option<RatInterval> {
        let SymbolKind::Multiplicative { base, generator } = &self.get(id).kind else {
            return None;
        };
        let b = base.eval_enclosure(self, level).ok()?;
        if !b.im.lo.is_zero() || !b.im.hi.is_zero() || !b.re.lo.is_positive() {
            return None;
        }
        let g = self.enclosure(*generator, level);
        let corners = [
            (b.re.lo.to_f64()?, g.lo.to_f64()?),
            (b.re.lo.to_f64()?, g.hi.to_f64()?),
            (b.re.hi.to_f64()?, g.lo.to_f64()?),
            (b.re.hi.to_f64()?, g.hi.to_f64()?),
        ];
        let vals: Vec<f64> = corners.iter().map(|(b, e)| b.powf(*e)).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 {
            return None;
        }
        // float powf is accurate to a few ulps; widen far beyond that
        Some(RatInterval::new(
            rational_from_f64(lo * (1.0 - 1e-9))?,
            rational_from_f64(hi * (1.0 + 1e-9))?,
        ))
    }
}

fn hint_enclosure(h: &RefineHint, digits: u32) -> RatInterval {
    match h {
        RefineHint::PiMultiple(k) => pi_enclosure(digits).scale(k),
        RefineHint::EMultiple(k) => e_enclosure(digits).scale(k),
        RefineHint::Digits(s) => digits_enclosure(s, digits),
    }
}

/// `[t, t + 10^-d]` (or mirrored for negatives) from a truncated decimal string.
fn digits_enclosure(s: &str, max_digits: u32) -> RatInterval {
    let neg = s.starts_with('-');
    let body = s.trim_start_matches(['-', '+']);
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let frac: String = frac_part.chars().take(max_digits as usize).collect();
    let d = frac.len();
    let scale = num_traits::pow(BigInt::from(10), d);
    let digits = format!("{int_part}{frac}");
    let n: BigInt = digits.parse().unwrap_or_default();
    let lo = BigRational::new(n.clone(), scale.clone());
    let hi = BigRational::new(n + 1, scale);
    if neg {
        RatInterval::new(-hi, -lo)
    } else {
        RatInterval::new(lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn refinement_tightens_pi_multiples() {
        let mut t = SymbolTable::new();
        let tau = t
            .declare("tau", RatInterval::new(r(15707, 10000), r(15708, 10000)), Some(RefineHint::PiMultiple(r(1, 2))))
            .unwrap();
        let e0 = t.enclosure(tau, 0);
        let e3 = t.enclosure(tau, 3);
        assert!(e3.width() < e0.width());
        assert!(e3.lo > r(15707963, 10_000_000) && e3.hi < r(15707964, 10_000_000));
    }

    #[test]
    fn inconsistent_hint_rejected() {
        let mut t = SymbolTable::new();
        let err = t.declare("tau", RatInterval::new(r(3, 1), r(4, 1)), Some(RefineHint::PiMultiple(r(1, 2))));
        assert!(matches!(err, Err(SymbolError::InconsistentHint(_))));
    }

    #[test]
    fn digit_hints() {
        let e = digits_enclosure("1.4142135", 4);
        assert_eq!(e.lo, r(14142, 10000));
        assert_eq!(e.hi, r(14143, 10000));
    }
}
