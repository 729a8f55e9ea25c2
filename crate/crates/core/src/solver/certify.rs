use std::cmp::Ordering;

use crate::equation::{Equation, MultiIndex};
use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::series::{GenSeries, OperatorKind};

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    /// The linearized operator along `s` has a regular singularity at 0.
    RegularSingular { lambda: Exponent, orders: Vec<Option<Exponent>> },
    NotCertified { reason: String, orders: Vec<Option<Exponent>> },
}

impl Certificate {
    pub fn is_regular(&self) -> bool {
        matches!(self, Certificate::RegularSingular { .. })
    }

    pub fn orders(&self) -> &[Option<Exponent>] {
        match self {
            Certificate::RegularSingular { orders, .. } | Certificate::NotCertified { orders, .. } => orders,
        }
    }
}

/// `ord dP/dy_k (s) - eps k`, or `None` when the partial vanishes along `s`.
/// With a truncated `s` the order must be insensitive to the unknown tail.
fn partial_order(p: &Equation, kappa: usize, s: &GenSeries, basis: &ExponentBasis) -> Result<PartialOrder> {
    let d = p.partial_derivative(kappa)?;
    let exact = GenSeries::from_terms(s.terms().to_vec(), basis)?;
    let q = d.substitute_series(&exact, basis)?;
    let head = q.coeff(&MultiIndex::zero(p.order()));
    let shift = Exponent::from_int(p.op().epsilon() * kappa as i64);
    let ord = head.ord().ok().cloned();
    let Some(w) = s.valid_to() else {
        return Ok(match ord {
            Some(o) => PartialOrder::Order(o.sub(&shift)),
            None => PartialOrder::Vanishes,
        });
    };
    // The tail t = s - (exact part) has ord t^(j) >= w - eps j.
    let mut bound: Option<Exponent> = None;
    for (rho, c) in q.coeffs() {
        if rho.is_zero() || c.is_zero() {
            continue;
        }
        let mut b = c.ord()?.clone();
        for (j, &r) in rho.0.iter().enumerate() {
            let tj = w.sub(&Exponent::from_int(p.op().epsilon() * j as i64));
            b = b.add(&tj.scale_int(r as i64));
        }
        bound = Some(match bound {
            Some(x) => basis.min(&x, &b)?.clone(),
            None => b,
        });
    }
    Ok(match (ord, bound) {
        (Some(o), Some(b)) if basis.lt(&o, &b)? => PartialOrder::Order(o.sub(&shift)),
        (Some(o), None) => PartialOrder::Order(o.sub(&shift)),
        (None, None) => PartialOrder::Vanishes,
        _ => PartialOrder::Unstable,
    })
}

enum PartialOrder {
    Order(Exponent),
    Vanishes,
    Unstable,
}

/// The order condition making the linearization of `P` along `s` regular singular.
pub fn convergence_certificate(p: &Equation, s: &GenSeries, basis: &ExponentBasis) -> Result<Certificate> {
    let n = p.order();
    let mut orders = Vec::with_capacity(n + 1);
    let mut unstable = Vec::new();
    for k in 0..=n {
        match partial_order(p, k, s, basis)? {
            PartialOrder::Order(o) => orders.push(Some(o)),
            PartialOrder::Vanishes => orders.push(None),
            PartialOrder::Unstable => {
                orders.push(None);
                unstable.push(k);
            }
        }
    }
    if !unstable.is_empty() {
        let ks: Vec<String> = unstable.iter().map(|k| format!("y{k}")).collect();
        return Ok(Certificate::NotCertified {
            reason: format!("truncation too short: order of the partial in {} is not yet determined", ks.join(", ")),
            orders,
        });
    }
    let present: Vec<(usize, &Exponent)> = orders.iter().enumerate().filter_map(|(k, o)| o.as_ref().map(|o| (k, o))).collect();
    if present.is_empty() {
        return Err(Error::AllPartialsVanish);
    }
    let mut lambda = present[0].1;
    for (_, o) in &present[1..] {
        lambda = basis.min(lambda, o)?;
    }
    let lambda = lambda.clone();
    let attained = |k: usize| orders[k].as_ref() == Some(&lambda);
    let small_q = p.op().q_modulus_vs_one(basis);
    if matches!(p.op(), OperatorKind::QDifference(_)) && small_q.is_none() {
        return Ok(Certificate::NotCertified { reason: "cannot decide whether |q| < 1".into(), orders });
    }
    let mut missing = Vec::new();
    if !attained(n) {
        missing.push(format!("y{n}"));
    }
    if small_q == Some(Ordering::Less) && !attained(0) {
        missing.push("y0".into());
    }
    if missing.is_empty() {
        Ok(Certificate::RegularSingular { lambda, orders })
    } else {
        Ok(Certificate::NotCertified {
            reason: format!("minimum {} is not attained at {}", lambda.to_string_with(&basis.table), missing.join(" and ")),
            orders,
        })
    }
}

/// Retries on a nonzero partial derivative when every partial vanishes along `s`.
pub fn convergence_certificate_with_fallback(p: &Equation, s: &GenSeries, basis: &ExponentBasis) -> Result<(Certificate, Vec<usize>)> {
    match convergence_certificate(p, s, basis) {
        Err(Error::AllPartialsVanish) => {
            for k in 0..=p.order() {
                let d = p.partial_derivative(k)?;
                if d.is_zero() {
                    continue;
                }
                if let Ok((c, mut path)) = convergence_certificate_with_fallback(&d, s, basis) {
                    path.insert(0, k);
                    return Ok((c, path));
                }
            }
            Err(Error::AllPartialsVanish)
        }
        r => r.map(|c| (c, Vec::new())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankAudit {
    pub rank: usize,
    pub bound: usize,
    pub ok: bool,
}

/// `dim span(supp s u supp P) / span(supp P) <= n`.
pub fn rank_audit(p: &Equation, s: &GenSeries, basis: &ExponentBasis) -> RankAudit {
    let rank = basis.rational_rank_quotient(&s.support(), &p.support());
    RankAudit { rank, bound: p.order(), ok: rank <= p.order() }
}
