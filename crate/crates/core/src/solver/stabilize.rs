use std::cmp::Ordering;

use crate::equation::{CloudPoint, Equation};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::polygon::build_polygon;
use crate::scalar::roots::UniPoly;
use crate::scalar::Scalar;
use crate::series::GenSeries;

use super::step::{Extension, Multiplicity, Source};
use super::{indicial_mu_roots, BranchState};

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizationReport {
    pub stabilized: bool,
    /// `V = Bot(E_(nu_(k-1))(P_k))`
    pub pivot: Option<CloudPoint>,
    pub psi: UniPoly,
    /// Real roots `mu >= 0` of `Psi_(P_k;V)(<mu>)`.
    pub sigma: Vec<Scalar>,
    /// The clause that failed, if any.
    pub witness: Option<String>,
}

fn not_stabilized(pivot: Option<CloudPoint>, psi: UniPoly, sigma: Vec<Scalar>, why: String) -> StabilizationReport {
    StabilizationReport { stabilized: false, pivot, psi, sigma, witness: Some(why) }
}

/// Evaluates the stabilization definition for the prefix `r` of `P`.
pub fn stabilization_check(p: &Equation, r: &GenSeries, basis: &ExponentBasis) -> Result<StabilizationReport> {
    let state = p.substitute_polynomial(r, basis)?;
    let Some((nu, _)) = r.last() else {
        return Ok(not_stabilized(None, UniPoly::zero(), Vec::new(), "empty prefix".into()));
    };
    check_state(&state, nu, basis)
}

fn check_state(state: &Equation, nu: &Exponent, basis: &ExponentBasis) -> Result<StabilizationReport> {
    let pts = state.cloud_points();
    if pts.is_empty() {
        return Ok(not_stabilized(None, UniPoly::zero(), Vec::new(), "the prefix is already a solution".into()));
    }
    let poly = build_polygon(&pts, basis)?;
    let v = poly.element_of_coslope(nu, basis)?.bot().clone();
    let psi = state.indicial_polynomial(&v);
    if v.height != 1 {
        return Ok(not_stabilized(Some(v.clone()), psi, Vec::new(), format!("bottom vertex has height {}", v.height)));
    }
    if psi.is_zero() {
        return Ok(not_stabilized(Some(v), psi, Vec::new(), "indicial polynomial vanishes identically".into()));
    }
    let roots = indicial_mu_roots(&psi, state, basis)?;
    if let Some(f) = &roots.unresolved {
        return Err(Error::NeedsAlgebraicExtension(format!("indicial factor {}", f.display(&basis.table, "T"))));
    }
    let level = basis.budget();
    let mut sigma = Vec::new();
    for (mu, _) in roots.roots {
        match mu.real_sign(&basis.table, level) {
            Some(Ordering::Less) => {}
            Some(_) => sigma.push(mu),
            None => {
                // complex roots are certified away by a nonzero imaginary part
                let im_nonzero = mu
                    .enclosure(&basis.table, level)
                    .map(|e| !e.im.contains_zero())
                    .unwrap_or(false);
                if !im_nonzero {
                    return Err(Error::Invalid(format!(
                        "cannot decide the sign of indicial root {}",
                        mu.to_string_with(&basis.table)
                    )));
                }
            }
        }
    }
    if !roots.other.is_empty() {
        return Err(Error::NeedsAlgebraicExtension("indicial roots are not powers of q with representable exponent".into()));
    }
    let nus = nu.to_scalar();
    for s in &sigma {
        match nus.sub(s).real_sign(&basis.table, level) {
            Some(Ordering::Greater) => {}
            Some(_) => {
                let why = format!(
                    "last exponent {} does not exceed the indicial root {}",
                    nu.to_string_with(&basis.table),
                    s.to_string_with(&basis.table)
                );
                return Ok(not_stabilized(Some(v), psi, sigma.clone(), why));
            }
            None => return Err(Error::Invalid("undecidable comparison with an indicial root".into())),
        }
    }
    Ok(StabilizationReport { stabilized: true, pivot: Some(v), psi, sigma, witness: None })
}

/// Appends up to `count` terms using the forced choice of a stabilized prefix.
pub fn stabilized_extend(b: &BranchState, count: usize, basis: &ExponentBasis) -> Result<BranchState> {
    let Some(nu) = &b.nu_prev else {
        return Err(Error::Invalid("stabilized extension needs a nonempty prefix".into()));
    };
    let report = check_state(&b.state, nu, basis)?;
    if !report.stabilized {
        return Err(Error::Invalid(format!(
            "prefix does not stabilize the equation: {}",
            report.witness.unwrap_or_default()
        )));
    }
    let mut cur = b.clone();
    for _ in 0..count {
        let residual = cur.residual();
        let Some((gamma, lead)) = residual.leading().cloned() else { break };
        let prev = cur.nu_prev.clone().expect("nonempty prefix");
        let pts = cur.state.cloud_points();
        let v = build_polygon(&pts, basis)?.element_of_coslope(&prev, basis)?.bot().clone();
        if v.height != 1 {
            return Err(Error::InvariantViolation("pivot left height 1 during stabilized extension".into()));
        }
        let nu_k = gamma.sub(&v.alpha);
        if !basis.lt(&prev, &nu_k)? {
            return Err(Error::InvariantViolation("forced exponent does not increase".into()));
        }
        let psi = cur.state.indicial_polynomial(&v);
        let t = cur.state.op().bracket_one(&nu_k, basis)?;
        let denom = psi.eval(&t);
        if denom.is_zero() {
            return Err(Error::InvariantViolation("indicial polynomial vanishes at a forced exponent".into()));
        }
        let c = lead.neg().div(&denom)?;
        let phi = UniPoly::new(vec![lead.clone(), denom]);
        cur = cur.extend(
            &Extension { nu: nu_k, c, multiplicity: Multiplicity::Finite(1), source: Source::Side, phi },
            basis,
        )?;
    }
    Ok(cur)
}
