use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::scalar::Scalar;
use crate::series::{GenSeries, OperatorKind};

use super::complete::{complete_from, CompleteOptions, Completion};
use super::step::{newton_step_nontrivial, Multiplicity, Policy, Source, StepOutcome};
use super::{BranchState, StepRecord};

#[derive(Clone, Debug, PartialEq)]
pub struct AutonomousResult {
    pub x0: Scalar,
    pub c0: Scalar,
    /// `P(y0 + c0, y1)`
    pub translated: Equation,
    /// Branches in the coordinate `t = x - x0`.
    pub completion: Completion,
}

impl AutonomousResult {
    /// First surviving branch.
    pub fn primary(&self) -> Option<&super::BranchResult> {
        self.completion.survivors().next()
    }
}

/// A Puiseux branch of an autonomous first-order equation through `(x0, c0)`.
pub fn autonomous_first_order(
    p: &Equation,
    x0: &Scalar,
    c0: &Scalar,
    opts: &CompleteOptions,
    basis: &ExponentBasis,
) -> Result<AutonomousResult> {
    if *p.op() != OperatorKind::OrdinaryDx || p.order() != 1 {
        return Err(Error::Invalid("autonomous solver expects a first-order d/dx equation".into()));
    }
    if !p.involves_y(1) {
        return Err(Error::Invalid("equation does not involve y1".into()));
    }
    if p.coeffs().values().any(|s| s.terms().iter().any(|(e, _)| !e.is_zero())) {
        return Err(Error::Invalid("coefficients must be constants for an autonomous equation".into()));
    }
    let zero = Exponent::zero();
    let mut start = BranchState::root(p);
    if !c0.is_zero() {
        start.prefix = GenSeries::constant(c0.clone());
        start.state = p.substitute_monomial(c0, &zero, basis)?;
        start.history.push(StepRecord {
            nu: zero.clone(),
            c: c0.clone(),
            source: Source::Given,
            multiplicity: Multiplicity::Finite(1),
            phi: crate::scalar::roots::UniPoly::zero(),
        });
    }
    start.nu_prev = Some(zero);
    let translated = start.state.clone();
    let mut opts = opts.clone();
    opts.policy = Policy::SidesOnly;
    // Prefer a nonconstant branch when the constant c0 already solves the equation.
    let starts = match newton_step_nontrivial(&start, Policy::SidesOnly, &opts.free_value, basis)? {
        StepOutcome::Extensions { list, .. } => {
            list.iter().map(|e| start.extend(e, basis)).collect::<Result<Vec<_>>>()?
        }
        _ => vec![start],
    };
    let completion = complete_from(p, starts, &opts, basis)?;
    Ok(AutonomousResult { x0: x0.clone(), c0: c0.clone(), translated, completion })
}
