use crate::equation::CloudPoint;
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::polygon::{build_polygon, element_entries, PolygonElement};
use crate::scalar::roots::{poly_roots_exact, UniPoly};
use crate::scalar::Scalar;

use super::{indicial_mu_roots, sort_fallible, BranchState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Policy {
    SidesOnly,
    #[default]
    SidesAndVertexRoots,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::SidesOnly => "sides_only",
            Policy::SidesAndVertexRoots => "sides_and_vertex_roots",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Side,
    VertexIndicial,
    /// Coefficients supplied by the caller or forced by stabilization.
    Given,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Source::Side => "side",
            Source::VertexIndicial => "vertex-indicial",
            Source::Given => "given",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Finite(usize),
    /// `Phi` vanishes identically: every `c` works; a sample value was used.
    Free,
}

impl Multiplicity {
    pub fn to_json(self) -> serde_json::Value {
        match self {
            Multiplicity::Finite(m) => m.into(),
            Multiplicity::Free => "free".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extension {
    pub nu: Exponent,
    pub c: Scalar,
    pub multiplicity: Multiplicity,
    pub source: Source,
    pub phi: UniPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub reason: String,
    /// Smallest candidate exponent, with its characteristic polynomial.
    pub nu: Option<Exponent>,
    pub phi: Option<UniPoly>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    ExactSolution,
    Extensions {
        list: Vec<Extension>,
        /// Candidates whose characteristic polynomial kept an unsolved factor.
        unresolved: Vec<(Exponent, UniPoly)>,
        /// Vertices where the indicial polynomial vanishes identically.
        notes: Vec<String>,
    },
    Obstruction(Obstruction),
    NeedsAlgebraicExtension { nu: Exponent, factor: UniPoly },
    Undecided(String),
}

/// One Newton step from `b`, with the sample value `free` for free coefficients.
pub fn newton_step(b: &BranchState, policy: Policy, free: &Scalar, basis: &ExponentBasis) -> Result<StepOutcome> {
    match step_inner(b, policy, free, basis, false) {
        Err(Error::Exponent(e)) => Ok(StepOutcome::Undecided(e.to_string())),
        r => r,
    }
}

/// As [`newton_step`] but looks for sides even when the zero series already solves the state.
pub(crate) fn newton_step_nontrivial(b: &BranchState, policy: Policy, free: &Scalar, basis: &ExponentBasis) -> Result<StepOutcome> {
    match step_inner(b, policy, free, basis, true) {
        Err(Error::Exponent(e)) => Ok(StepOutcome::Undecided(e.to_string())),
        r => r,
    }
}

struct Candidate {
    nu: Exponent,
    source: Source,
}

fn step_inner(b: &BranchState, policy: Policy, free: &Scalar, basis: &ExponentBasis, nontrivial: bool) -> Result<StepOutcome> {
    let cloud = b.state.cloud();
    if cloud.is_empty() {
        return Ok(StepOutcome::ExactSolution);
    }
    let points: Vec<CloudPoint> = cloud.iter().map(|e| e.point.clone()).collect();
    let poly = build_polygon(&points, basis)?;
    if !poly.meets_axis() && !nontrivial {
        return Ok(StepOutcome::ExactSolution);
    }
    let above = |nu: &Exponent| -> Result<bool> {
        Ok(match &b.nu_prev {
            None => true,
            Some(v) => basis.lt(v, nu)?,
        })
    };
    let mut cands: Vec<Candidate> = poly
        .sides_above(b.nu_prev.as_ref(), basis)?
        .into_iter()
        .map(|s| Candidate { nu: s.coslope, source: Source::Side })
        .collect();
    let mut notes = Vec::new();
    let mut unresolved = Vec::new();
    if policy == Policy::SidesAndVertexRoots {
        for v in poly.hull.iter().filter(|v| v.height > 0) {
            let psi = b.state.indicial_polynomial(v);
            if psi.is_zero() {
                notes.push(format!("indicial polynomial vanishes at {}", v.to_string_with(&basis.table)));
                continue;
            }
            let roots = indicial_mu_roots(&psi, &b.state, basis)?;
            if let Some(f) = roots.unresolved {
                notes.push(format!(
                    "indicial polynomial at {} keeps the factor {}",
                    v.to_string_with(&basis.table),
                    f.display(&basis.table, "T")
                ));
            }
            for (_, exp) in roots.roots {
                let Some(mu) = exp else { continue };
                if !above(&mu)? || cands.iter().any(|c| c.nu == mu) {
                    continue;
                }
                if poly.element_of_coslope(&mu, basis)? == PolygonElement::Vertex(v.clone()) {
                    cands.push(Candidate { nu: mu, source: Source::VertexIndicial });
                }
            }
        }
    }
    sort_fallible(&mut cands, |a, b| Ok(basis.compare(&a.nu, &b.nu)?))?;

    let mut list = Vec::new();
    let mut first_phi: Option<(Exponent, UniPoly)> = None;
    for cand in &cands {
        let pts = element_entries(&cloud, &cand.nu, basis)?;
        let phi = b.state.characteristic_on(&cand.nu, &pts, basis)?;
        if first_phi.is_none() {
            first_phi = Some((cand.nu.clone(), phi.clone()));
        }
        if phi.is_zero() {
            list.push(Extension { nu: cand.nu.clone(), c: free.clone(), multiplicity: Multiplicity::Free, source: cand.source, phi });
            continue;
        }
        let rs = poly_roots_exact(&phi)?;
        let mut found: Vec<Extension> = rs
            .nonzero()
            .map(|(c, m)| Extension {
                nu: cand.nu.clone(),
                c: c.clone(),
                multiplicity: Multiplicity::Finite(*m),
                source: cand.source,
                phi: phi.clone(),
            })
            .collect();
        found.sort_by_key(|e| e.c.to_string_with(&basis.table));
        list.extend(found);
        if let Some(f) = rs.unresolved {
            unresolved.push((cand.nu.clone(), f));
        }
    }
    if !list.is_empty() {
        return Ok(StepOutcome::Extensions { list, unresolved, notes });
    }
    if let Some((nu, factor)) = unresolved.into_iter().next() {
        return Ok(StepOutcome::NeedsAlgebraicExtension { nu, factor });
    }
    if nontrivial && !poly.meets_axis() {
        return Ok(StepOutcome::ExactSolution);
    }
    Ok(StepOutcome::Obstruction(match first_phi {
        Some((nu, phi)) => Obstruction {
            reason: format!(
                "characteristic polynomial at exponent {} has no nonzero root",
                nu.to_string_with(&basis.table)
            ),
            nu: Some(nu),
            phi: Some(phi),
        },
        None => Obstruction {
            reason: match &b.nu_prev {
                Some(v) => format!("no side with co-slope above {}", v.to_string_with(&basis.table)),
                None => "no side of the polygon".into(),
            },
            nu: None,
            phi: None,
        },
    }))
}
