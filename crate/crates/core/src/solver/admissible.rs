use crate::equation::{CloudPoint, Equation};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::polygon::{build_polygon, element_entries, PolygonElement};
use crate::scalar::roots::UniPoly;
use crate::scalar::Scalar;
use crate::series::GenSeries;

use super::{BranchState, Multiplicity, Source, StepRecord};

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityStep {
    pub nu: Exponent,
    pub c: Scalar,
    /// `Phi_(P_i; nu_i)`
    pub phi: UniPoly,
    /// `Phi_(P_i; nu_i)(c_i)`
    pub value: Scalar,
    /// `E_(nu_i)(P_i)`, absent when `P_i` vanishes.
    pub element: Option<PolygonElement>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub steps: Vec<AdmissibilityStep>,
    /// `Bot(E_(nu_k)(P[r]))`, absent for the empty prefix or a vanishing `P[r]`.
    pub final_bottom: Option<CloudPoint>,
    /// Index of the first step with `Phi(c) != 0`.
    pub first_failure: Option<usize>,
    /// The last substituted state together with prefix bookkeeping.
    pub branch: BranchState,
}

/// Checks `Phi_(P_i; nu_i)(c_i) = 0` for every term and cross-checks with the bottom vertex
/// of `E_(nu_k)(P[r])`.
pub fn check_admissible(p: &Equation, r: &GenSeries, basis: &ExponentBasis) -> Result<AdmissibilityReport> {
    let mut state = p.clone();
    let mut steps = Vec::with_capacity(r.len());
    let mut history = Vec::with_capacity(r.len());
    let mut first_failure = None;
    for (i, (nu, c)) in r.terms().iter().enumerate() {
        if c.is_zero() {
            return Err(Error::Invalid("zero coefficient in a generalized polynomial".into()));
        }
        let cloud = state.cloud();
        let (phi, element) = if cloud.is_empty() {
            (UniPoly::zero(), None)
        } else {
            let pts: Vec<_> = cloud.iter().map(|e| e.point.clone()).collect();
            let poly = build_polygon(&pts, basis)?;
            let on = element_entries(&cloud, nu, basis)?;
            (state.characteristic_on(nu, &on, basis)?, Some(poly.element_of_coslope(nu, basis)?))
        };
        let value = phi.eval(c);
        if !value.is_zero() && first_failure.is_none() {
            first_failure = Some(i);
        }
        history.push(StepRecord {
            nu: nu.clone(),
            c: c.clone(),
            source: Source::Given,
            multiplicity: Multiplicity::Finite(1),
            phi: phi.clone(),
        });
        steps.push(AdmissibilityStep { nu: nu.clone(), c: c.clone(), phi, value, element });
        state = state.substitute_monomial(c, nu, basis)?;
    }
    let final_bottom = match r.last() {
        Some((nu, _)) => {
            let pts = state.cloud_points();
            if pts.is_empty() {
                None
            } else {
                let poly = build_polygon(&pts, basis)?;
                Some(poly.element_of_coslope(nu, basis)?.bot().clone())
            }
        }
        None => None,
    };
    let by_eq4 = first_failure.is_none();
    let by_bottom = final_bottom.as_ref().is_none_or(|v| v.height >= 1);
    if by_eq4 != by_bottom {
        return Err(Error::InvariantViolation(format!(
            "admissibility characterizations disagree (per-step: {by_eq4}, bottom vertex: {by_bottom})"
        )));
    }
    let branch = BranchState { prefix: r.clone(), state, nu_prev: r.last().map(|(e, _)| e.clone()), history };
    Ok(AdmissibilityReport { admissible: by_eq4, steps, final_bottom, first_failure, branch })
}
