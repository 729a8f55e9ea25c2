use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::scalar::roots::UniPoly;
use crate::scalar::Scalar;
use crate::series::GenSeries;

use super::admissible::{check_admissible, AdmissibilityReport};
use super::step::{newton_step, Obstruction, Policy, StepOutcome};
use super::{sort_fallible, BranchState};

#[derive(Clone, Debug, PartialEq)]
pub struct Budget {
    /// Total number of prefix terms, initial segment included.
    pub max_terms: usize,
    pub max_exponent: Option<Exponent>,
    /// Cap on branches kept alive at once.
    pub max_branches: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_terms: 8, max_exponent: None, max_branches: 64 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompleteOptions {
    pub budget: Budget,
    pub policy: Policy,
    /// Sample used for free coefficients.
    pub free_value: Scalar,
}

impl Default for CompleteOptions {
    fn default() -> Self {
        Self { budget: Budget::default(), policy: Policy::default(), free_value: Scalar::one() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BranchOutcome {
    ExactSolution,
    BudgetReached,
    Obstruction(Obstruction),
    NeedsAlgebraicExtension { nu: Exponent, factor: UniPoly },
    Undecided(String),
}

impl BranchOutcome {
    pub fn name(&self) -> &'static str {
        match self {
            BranchOutcome::ExactSolution => "exact_solution",
            BranchOutcome::BudgetReached => "budget_reached",
            BranchOutcome::Obstruction(_) => "obstruction",
            BranchOutcome::NeedsAlgebraicExtension { .. } => "needs_algebraic_extension",
            BranchOutcome::Undecided(_) => "undecided",
        }
    }

    /// Still a candidate truncation of a solution.
    pub fn survives(&self) -> bool {
        matches!(self, BranchOutcome::ExactSolution | BranchOutcome::BudgetReached)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchResult {
    pub branch: BranchState,
    pub outcome: BranchOutcome,
    /// `ord P(prefix)`, `None` when the residual vanishes.
    pub residual_order: Option<Exponent>,
    pub residual: GenSeries,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Completion {
    pub branches: Vec<BranchResult>,
    pub admissibility: Option<AdmissibilityReport>,
    /// `rank(supp r, supp P) >= n`: at least one branch must survive.
    pub rank_hypothesis: bool,
}

impl Completion {
    pub fn survivors(&self) -> impl Iterator<Item = &BranchResult> {
        self.branches.iter().filter(|b| b.outcome.survives())
    }
}

/// Completes the admissible prefix `r` branch by branch.
pub fn complete(p: &Equation, r: &GenSeries, opts: &CompleteOptions, basis: &ExponentBasis) -> Result<Completion> {
    let report = check_admissible(p, r, basis)?;
    if !report.admissible {
        return Err(Error::Invalid("the initial segment is not admissible".into()));
    }
    let start = report.branch.clone();
    let mut c = complete_from(p, vec![start], opts, basis)?;
    c.admissibility = Some(report);
    Ok(c)
}

/// Breadth-first exploration from the given states.
pub fn complete_from(p: &Equation, starts: Vec<BranchState>, opts: &CompleteOptions, basis: &ExponentBasis) -> Result<Completion> {
    let prefix_support: Vec<Exponent> = starts.first().map(|b| b.prefix.support()).unwrap_or_default();
    let rank_hypothesis = basis.rational_rank_quotient(&prefix_support, &p.support()) >= p.order();
    let mut queue: VecDeque<BranchState> = starts.into();
    let mut done: Vec<(BranchState, BranchOutcome)> = Vec::new();
    while let Some(b) = queue.pop_front() {
        if b.prefix.len() >= opts.budget.max_terms {
            done.push((b, BranchOutcome::BudgetReached));
            continue;
        }
        match newton_step(&b, opts.policy, &opts.free_value, basis)? {
            StepOutcome::ExactSolution => done.push((b, BranchOutcome::ExactSolution)),
            StepOutcome::Obstruction(o) => done.push((b, BranchOutcome::Obstruction(o))),
            StepOutcome::NeedsAlgebraicExtension { nu, factor } => {
                done.push((b, BranchOutcome::NeedsAlgebraicExtension { nu, factor }))
            }
            StepOutcome::Undecided(m) => done.push((b, BranchOutcome::Undecided(m))),
            StepOutcome::Extensions { list, .. } => {
                let mut kept = Vec::new();
                for e in list {
                    let within = match &opts.budget.max_exponent {
                        Some(m) => basis.compare(&e.nu, m)? != Ordering::Greater,
                        None => true,
                    };
                    if within {
                        kept.push(e);
                    }
                }
                if kept.is_empty() {
                    done.push((b, BranchOutcome::BudgetReached));
                    continue;
                }
                for e in kept {
                    if queue.len() + done.len() >= opts.budget.max_branches {
                        done.push((b.clone(), BranchOutcome::BudgetReached));
                        break;
                    }
                    queue.push_back(b.extend(&e, basis)?);
                }
            }
        }
    }
    if rank_hypothesis && !done.is_empty() && done.iter().all(|(_, o)| matches!(o, BranchOutcome::Obstruction(_))) {
        return Err(Error::InvariantViolation(
            "every branch ended in an obstruction although the rank hypothesis holds".into(),
        ));
    }
    let mut branches: Vec<BranchResult> = done
        .into_iter()
        .map(|(branch, outcome)| {
            let residual = branch.residual();
            let residual_order = residual.ord().ok().cloned();
            BranchResult { branch, outcome, residual_order, residual }
        })
        .collect();
    sort_fallible(&mut branches, |a, b| divergence_order(&a.branch.prefix, &b.branch.prefix, basis))?;
    Ok(Completion { branches, admissibility: None, rank_hypothesis })
}

/// Order by the first differing term: exponent, then coefficient rendering; a prefix comes first.
pub(crate) fn divergence_order(a: &GenSeries, b: &GenSeries, basis: &ExponentBasis) -> Result<Ordering> {
    for ((ea, ca), (eb, cb)) in a.terms().iter().zip(b.terms()) {
        if ea != eb {
            return Ok(basis.compare(ea, eb)?);
        }
        if ca != cb {
            return Ok(ca.to_string_with(&basis.table).cmp(&cb.to_string_with(&basis.table)));
        }
    }
    Ok(a.len().cmp(&b.len()))
}
