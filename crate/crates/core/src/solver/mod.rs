//! Admissibility, Newton steps, completion, stabilization and certificates.

mod admissible;
mod autonomous;
mod certify;
mod complete;
mod stabilize;
mod step;

use std::cmp::Ordering;

pub use admissible::{check_admissible, AdmissibilityReport, AdmissibilityStep};
pub use autonomous::{autonomous_first_order, AutonomousResult};
pub use certify::{convergence_certificate, convergence_certificate_with_fallback, rank_audit, Certificate, RankAudit};
pub use complete::{complete, complete_from, Budget, BranchOutcome, BranchResult, CompleteOptions, Completion};
pub use stabilize::{stabilization_check, stabilized_extend, StabilizationReport};
pub use step::{newton_step, Extension, Multiplicity, Obstruction, Policy, Source, StepOutcome};

use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::scalar::roots::UniPoly;
use crate::scalar::Scalar;
use crate::series::GenSeries;

/// One chosen term `c x^nu` and the characteristic polynomial it killed.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub nu: Exponent,
    pub c: Scalar,
    pub source: Source,
    pub multiplicity: Multiplicity,
    pub phi: UniPoly,
}

/// A prefix `r` together with `P[r]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchState {
    pub prefix: GenSeries,
    pub state: Equation,
    pub nu_prev: Option<Exponent>,
    pub history: Vec<StepRecord>,
}

impl BranchState {
    /// The empty prefix.
    pub fn root(p: &Equation) -> Self {
        Self { prefix: GenSeries::zero(), state: p.clone(), nu_prev: None, history: Vec::new() }
    }

    /// `P[r]` with the history left empty.
    pub fn from_prefix(p: &Equation, r: &GenSeries, basis: &ExponentBasis) -> Result<Self> {
        Ok(Self {
            prefix: r.clone(),
            state: p.substitute_polynomial(r, basis)?,
            nu_prev: r.last().map(|(e, _)| e.clone()),
            history: Vec::new(),
        })
    }

    pub fn extend(&self, ext: &Extension, basis: &ExponentBasis) -> Result<Self> {
        if let Some(prev) = &self.nu_prev {
            if !basis.lt(prev, &ext.nu)? {
                return Err(Error::InvariantViolation("extension exponent does not increase".into()));
            }
        }
        let term = GenSeries::monomial(ext.c.clone(), ext.nu.clone());
        let mut history = self.history.clone();
        history.push(StepRecord {
            nu: ext.nu.clone(),
            c: ext.c.clone(),
            source: ext.source,
            multiplicity: ext.multiplicity,
            phi: ext.phi.clone(),
        });
        Ok(Self {
            prefix: self.prefix.add(&term, basis)?,
            state: self.state.substitute_monomial(&ext.c, &ext.nu, basis)?,
            nu_prev: Some(ext.nu.clone()),
            history,
        })
    }

    /// `P(r)`, the y-free part of the state.
    pub fn residual(&self) -> GenSeries {
        self.state.coeff(&crate::equation::MultiIndex::zero(self.state.order()))
    }
}

/// Insertion sort with a fallible comparator (comparisons may be undecidable).
pub(crate) fn sort_fallible<T>(v: &mut [T], mut cmp: impl FnMut(&T, &T) -> Result<Ordering>) -> Result<()> {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && cmp(&v[j - 1], &v[j])? == Ordering::Greater {
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    Ok(())
}

/// Recovers `gamma` from `t = q^gamma`, if `t` has that shape.
pub(crate) fn q_log(t: &Scalar, q: &Scalar, basis: &ExponentBasis) -> Option<Exponent> {
    use crate::scalar::SymbolKind;
    use num_rational::BigRational;
    let (c, m) = t.as_monomial()?;
    let mut irr = Vec::new();
    for (s, e) in m.iter() {
        match &basis.table.get(*s).kind {
            SymbolKind::Multiplicative { base, generator } if base.as_ref() == q => irr.push((*generator, e.clone())),
            _ => return None,
        }
    }
    let c = Scalar::from_gaussian(c);
    let g0 = if c.is_one() {
        BigRational::from_integer(0.into())
    } else {
        let qv = q.as_rational()?;
        let cv = c.as_rational()?;
        use num_traits::{Signed, ToPrimitive};
        if !cv.is_positive() || !qv.is_positive() {
            return None;
        }
        let guess = cv.to_f64()?.ln() / qv.to_f64()?.ln();
        if !guess.is_finite() {
            return None;
        }
        (1..=24i64).find_map(|d| {
            let n = (guess * d as f64).round() as i64;
            let g = BigRational::new(n.into(), d.into());
            (q.pow_rational(&g).ok()? == c).then_some(g)
        })?
    };
    Some(Exponent::new(g0, irr))
}

/// Real roots of an indicial polynomial as values of `mu`, via `<mu> = T`.
pub(crate) fn indicial_mu_roots(psi: &UniPoly, p: &Equation, basis: &ExponentBasis) -> Result<IndicialRoots> {
    use crate::scalar::roots::poly_roots_exact;
    use crate::series::OperatorKind;
    let rs = poly_roots_exact(psi)?;
    let mut out = IndicialRoots::default();
    for (t, _) in &rs.roots {
        let mu = match p.op() {
            OperatorKind::QDifference(q) => {
                if t.is_zero() {
                    continue;
                }
                q_log(t, q, basis).map(|e| e.to_scalar())
            }
            _ => Some(t.clone()),
        };
        match mu {
            Some(mu) => {
                let exp = Exponent::from_scalar(&mu).filter(|e| e.irr().iter().all(|(s, _)| basis.generators().contains(s)));
                out.roots.push((mu, exp));
            }
            None => out.other.push(t.clone()),
        }
    }
    out.unresolved = rs.unresolved;
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub(crate) struct IndicialRoots {
    /// `(mu, mu as an exponent when representable)`
    pub roots: Vec<(Scalar, Option<Exponent>)>,
    /// roots `T` that are not `q^gamma` for a representable `gamma`
    pub other: Vec<Scalar>,
    pub unresolved: Option<UniPoly>,
}

#[cfg(test)]
mod tests;
