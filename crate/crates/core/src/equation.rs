//! Polynomials in `y0..yn` over generalized series, with an operator kind.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exponent::{Exponent, ExponentBasis};
use crate::scalar::roots::UniPoly;
use crate::scalar::{Scalar, SymbolTable};
use crate::series::{term_text, GenSeries, OperatorKind};

/// Exponent vector `rho` of `y0^rho0 ... yn^rhon`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(order: usize) -> Self {
        Self(vec![0; order + 1])
    }

    pub fn unit(order: usize, kappa: usize) -> Self {
        let mut v = vec![0; order + 1];
        v[kappa] = 1;
        Self(v)
    }

    /// `|rho|`
    pub fn abs(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `omega(rho) = sum kappa * rho_kappa`
    pub fn omega(&self) -> u32 {
        self.0.iter().enumerate().map(|(k, &r)| k as u32 * r).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&r| r == 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &r in &self.0 {
            out = out
                .into_iter()
                .flat_map(|pre| {
                    (0..=r).map(move |s| {
                        let mut p = pre.clone();
                        p.push(s);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(MultiIndex).collect()
    }
}

/// A point `(alpha, r)` of the cloud.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CloudPoint {
    pub alpha: Exponent,
    pub height: u32,
}

impl CloudPoint {
    pub fn new(alpha: Exponent, height: u32) -> Self {
        Self { alpha, height }
    }

    pub fn to_string_with(&self, table: &SymbolTable) -> String {
        format!("({}, {})", self.alpha.display(table), self.height)
    }
}

/// A cloud point with the coefficients `P_(alpha, rho)` that put it there.
#[derive(Clone, Debug, PartialEq)]
pub struct CloudEntry {
    pub point: CloudPoint,
    pub terms: Vec<(MultiIndex, Scalar)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    order: usize,
    op: OperatorKind,
    coeffs: BTreeMap<MultiIndex, GenSeries>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl Equation {
    pub fn new(order: usize, op: OperatorKind, coeffs: impl IntoIterator<Item = (MultiIndex, GenSeries)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (rho, s) in coeffs {
            if rho.0.len() != order + 1 {
                return Err(Error::Invalid(format!("multi-index of length {} for order {order}", rho.0.len())));
            }
            if !s.is_exact_zero() {
                map.insert(rho, s);
            }
        }
        Ok(Self { order, op, coeffs: map })
    }

    pub fn zero(order: usize, op: OperatorKind) -> Self {
        Self { order, op, coeffs: BTreeMap::new() }
    }

    /// The polynomial `s` (no `y` dependence).
    pub fn constant(order: usize, op: OperatorKind, s: GenSeries) -> Self {
        Self::new(order, op, [(MultiIndex::zero(order), s)]).expect("valid index")
    }

    /// The polynomial `y_kappa`.
    pub fn y(order: usize, op: OperatorKind, kappa: usize) -> Self {
        Self::new(order, op, [(MultiIndex::unit(order, kappa), GenSeries::constant(Scalar::one()))]).expect("valid index")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn op(&self) -> &OperatorKind {
        &self.op
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, GenSeries> {
        &self.coeffs
    }

    pub fn coeff(&self, rho: &MultiIndex) -> GenSeries {
        self.coeffs.get(rho).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|s| s.is_zero())
    }

    /// Same polynomial viewed with a larger order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        if order < self.order {
            let used = self.coeffs.keys().any(|r| r.0[order + 1..].iter().any(|&x| x > 0));
            if used {
                return Err(Error::Invalid(format!("equation involves y beyond y{order}")));
            }
        }
        let coeffs = self.coeffs.iter().map(|(r, s)| {
            let mut v = r.0.clone();
            v.resize(order + 1, 0);
            (MultiIndex(v), s.clone())
        });
        Self::new(order, self.op.clone(), coeffs)
    }

    pub fn with_op(&self, op: OperatorKind) -> Self {
        Self { op, ..self.clone() }
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.order != o.order || self.op != o.op {
            return Err(Error::Invalid("equations differ in order or operator".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self, basis: &ExponentBasis) -> Result<Self> {
        self.same_shape(o)?;
        let mut map = self.coeffs.clone();
        for (rho, s) in &o.coeffs {
            let v = match map.get(rho) {
                Some(a) => a.add(s, basis)?,
                None => s.clone(),
            };
            map.insert(rho.clone(), v);
        }
        Self::new(self.order, self.op.clone(), map)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(r, s)| (r.clone(), s.neg())).collect(), ..self.clone() }
    }

    pub fn sub(&self, o: &Self, basis: &ExponentBasis) -> Result<Self> {
        self.add(&o.neg(), basis)
    }

    pub fn mul(&self, o: &Self, basis: &ExponentBasis) -> Result<Self> {
        self.same_shape(o)?;
        let mut map: BTreeMap<MultiIndex, GenSeries> = BTreeMap::new();
        for (ra, sa) in &self.coeffs {
            for (rb, sb) in &o.coeffs {
                let rho = ra.add(rb);
                let p = sa.mul(sb, basis)?;
                let v = match map.get(&rho) {
                    Some(a) => a.add(&p, basis)?,
                    None => p,
                };
                map.insert(rho, v);
            }
        }
        Self::new(self.order, self.op.clone(), map)
    }

    pub fn pow(&self, k: u32, basis: &ExponentBasis) -> Result<Self> {
        let mut acc = Self::constant(self.order, self.op.clone(), GenSeries::constant(Scalar::one()));
        for _ in 0..k {
            acc = acc.mul(self, basis)?;
        }
        Ok(acc)
    }

    /// Union of the coefficient supports.
    pub fn support(&self) -> Vec<Exponent> {
        let mut out: Vec<Exponent> = Vec::new();
        for s in self.coeffs.values() {
            for (e, _) in s.terms() {
                if !out.contains(e) {
                    out.push(e.clone());
                }
            }
        }
        out
    }

    /// Largest `|rho|` present.
    pub fn degree(&self) -> u32 {
        self.coeffs.iter().filter(|(_, s)| !s.is_zero()).map(|(r, _)| r.abs()).max().unwrap_or(0)
    }

    pub fn involves_y(&self, kappa: usize) -> bool {
        self.coeffs.iter().any(|(r, s)| r.0[kappa] > 0 && !s.is_zero())
    }

    /// `P[c x^nu]`: `y_k -> c <nu>_k x^(nu - eps k) + y_k`.
    pub fn substitute_monomial(&self, c: &Scalar, nu: &Exponent, basis: &ExponentBasis) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::Invalid("substitution of a zero monomial".into()));
        }
        let eps = self.op.epsilon();
        let mut shifts = Vec::with_capacity(self.order + 1);
        for k in 0..=self.order {
            let f = c.mul(&self.op.bracket(nu, k, basis)?);
            shifts.push((f, nu.sub(&Exponent::from_int(eps * k as i64))));
        }
        let mut acc: HashMap<MultiIndex, Vec<GenSeries>> = HashMap::new();
        for (rho, s) in &self.coeffs {
            for sigma in rho.sub_indices() {
                let mut k_acc = Scalar::one();
                let mut e_acc = Exponent::zero();
                for (k, (f, e)) in shifts.iter().enumerate() {
                    let d = rho.0[k] - sigma.0[k];
                    if d == 0 {
                        continue;
                    }
                    let b = Scalar::from_rational(BigRational::from_integer(binomial(rho.0[k], d)));
                    k_acc = k_acc.mul(&b).mul(&f.pow_int(d as i64)?);
                    e_acc = e_acc.add(&e.scale_int(d as i64));
                }
                if k_acc.is_zero() {
                    continue;
                }
                acc.entry(sigma).or_default().push(s.mul_monomial(&k_acc, &e_acc));
            }
        }
        self.collect(acc, basis)
    }

    fn collect(&self, acc: HashMap<MultiIndex, Vec<GenSeries>>, basis: &ExponentBasis) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (rho, parts) in acc {
            let mut w: Option<Exponent> = None;
            let mut terms = Vec::new();
            for p in parts {
                if let Some(v) = p.valid_to() {
                    w = Some(match w {
                        Some(u) => basis.min(&u, v)?.clone(),
                        None => v.clone(),
                    });
                }
                terms.extend(p.into_terms());
            }
            map.insert(rho, GenSeries::from_terms(terms, basis)?.with_valid_to(w, basis)?);
        }
        Self::new(self.order, self.op.clone(), map)
    }

    /// `P[r]` as a left fold of monomial substitutions over the terms of `r`.
    pub fn substitute_polynomial(&self, r: &GenSeries, basis: &ExponentBasis) -> Result<Self> {
        let mut p = self.clone();
        for (e, c) in r.terms() {
            p = p.substitute_monomial(c, e, basis)?;
        }
        Ok(p)
    }

    /// `P[s]` in one shot: `y_k -> s^(k) + y_k`.
    #[allow(clippy::needless_range_loop)]
    pub fn substitute_series(&self, s: &GenSeries, basis: &ExponentBasis) -> Result<Self> {
        let derivs = self.derivatives_of(s, basis)?;
        let mut powers: HashMap<(usize, u32), GenSeries> = HashMap::new();
        let mut acc: HashMap<MultiIndex, Vec<GenSeries>> = HashMap::new();
        for (rho, coeff) in &self.coeffs {
            for sigma in rho.sub_indices() {
                let mut part = coeff.clone();
                let mut k_acc = Scalar::one();
                for k in 0..=self.order {
                    let d = rho.0[k] - sigma.0[k];
                    if d == 0 {
                        continue;
                    }
                    k_acc = k_acc.mul(&Scalar::from_rational(BigRational::from_integer(binomial(rho.0[k], d))));
                    let pw = power_cached(&mut powers, &derivs[k], k, d, basis)?;
                    part = part.mul(&pw, basis)?;
                }
                acc.entry(sigma).or_default().push(part.scale(&k_acc));
            }
        }
        self.collect(acc, basis)
    }

    fn derivatives_of(&self, s: &GenSeries, basis: &ExponentBasis) -> Result<Vec<GenSeries>> {
        (0..=self.order).map(|k| s.apply_operator(&self.op, k, basis)).collect()
    }

    /// `P(s, s', ..., s^(n))`.
    pub fn evaluate_residual(&self, s: &GenSeries, basis: &ExponentBasis) -> Result<GenSeries> {
        let derivs = self.derivatives_of(s, basis)?;
        let mut powers: HashMap<(usize, u32), GenSeries> = HashMap::new();
        let mut total = GenSeries::zero();
        for (rho, coeff) in &self.coeffs {
            let mut part = coeff.clone();
            for (k, &d) in rho.0.iter().enumerate() {
                if d > 0 {
                    let pw = power_cached(&mut powers, &derivs[k], k, d, basis)?;
                    part = part.mul(&pw, basis)?;
                }
            }
            total = total.add(&part, basis)?;
        }
        Ok(total)
    }

    /// `dP/dy_kappa`.
    pub fn partial_derivative(&self, kappa: usize) -> Result<Self> {
        if kappa > self.order {
            return Err(Error::Invalid(format!("y{kappa} exceeds order {}", self.order)));
        }
        let coeffs = self.coeffs.iter().filter(|(r, _)| r.0[kappa] > 0).map(|(r, s)| {
            let mut v = r.0.clone();
            v[kappa] -= 1;
            (MultiIndex(v), s.scale(&Scalar::from_int(r.0[kappa] as i64)))
        });
        Self::new(self.order, self.op.clone(), coeffs)
    }

    /// Points `(beta - eps*omega(rho), |rho|)` with their coefficients, in a deterministic order.
    pub fn cloud(&self) -> Vec<CloudEntry> {
        let eps = self.op.epsilon();
        let mut out: Vec<CloudEntry> = Vec::new();
        let mut index: HashMap<CloudPoint, usize> = HashMap::new();
        for (rho, s) in &self.coeffs {
            let shift = Exponent::from_int(eps * rho.omega() as i64);
            for (beta, c) in s.terms() {
                let pt = CloudPoint::new(beta.sub(&shift), rho.abs());
                match index.get(&pt) {
                    Some(&i) => out[i].terms.push((rho.clone(), c.clone())),
                    None => {
                        index.insert(pt.clone(), out.len());
                        out.push(CloudEntry { point: pt, terms: vec![(rho.clone(), c.clone())] });
                    }
                }
            }
        }
        out
    }

    pub fn cloud_points(&self) -> Vec<CloudPoint> {
        self.cloud().into_iter().map(|e| e.point).collect()
    }

    /// `T^<rho>`: `T^omega` for Euler and q, a product of falling factorials for `d/dx`.
    pub fn t_power(&self, rho: &MultiIndex) -> UniPoly {
        match self.op {
            OperatorKind::OrdinaryDx => {
                let mut acc = UniPoly::constant(Scalar::one());
                for (k, &r) in rho.0.iter().enumerate() {
                    let ff = (0..k).fold(UniPoly::constant(Scalar::one()), |a, i| {
                        a.mul(&UniPoly::linear_root(&Scalar::from_int(i as i64)))
                    });
                    acc = acc.mul(&ff.pow(r as usize));
                }
                acc
            }
            _ => {
                let mut c = vec![Scalar::zero(); rho.omega() as usize];
                c.push(Scalar::one());
                UniPoly::new(c)
            }
        }
    }

    /// `Psi_(P;V)(T)`; zero when `V` is not in the cloud.
    pub fn indicial_polynomial(&self, v: &CloudPoint) -> UniPoly {
        let cloud = self.cloud();
        match cloud.iter().find(|e| &e.point == v) {
            Some(e) => self.indicial_of(e),
            None => UniPoly::zero(),
        }
    }

    pub fn indicial_of(&self, entry: &CloudEntry) -> UniPoly {
        entry
            .terms
            .iter()
            .fold(UniPoly::zero(), |acc, (rho, c)| acc.add(&self.t_power(rho).scale(c)))
    }

    /// `sum_V Psi_(P;V)(<mu>) C^height(V)` over the given element points.
    pub fn characteristic_on(&self, mu: &Exponent, points: &[CloudEntry], basis: &ExponentBasis) -> Result<UniPoly> {
        let t = self.op.bracket_one(mu, basis)?;
        let top = points.iter().map(|e| e.point.height).max().unwrap_or(0) as usize;
        let mut c = vec![Scalar::zero(); top + 1];
        for e in points {
            let v = self.indicial_of(e).eval(&t);
            let h = e.point.height as usize;
            c[h] = c[h].add(&v);
        }
        Ok(UniPoly::new(c))
    }

    /// `Phi_(P;mu)(C)` with `E_mu(P)` computed from the polygon.
    pub fn characteristic_polynomial(&self, mu: &Exponent, basis: &ExponentBasis) -> Result<UniPoly> {
        let cloud = self.cloud();
        let pts = crate::polygon::element_entries(&cloud, mu, basis)?;
        self.characteristic_on(mu, &pts, basis)
    }

    pub fn display<'a>(&'a self, table: &'a SymbolTable) -> EquationDisplay<'a> {
        EquationDisplay { p: self, table }
    }

    pub fn to_string_with(&self, table: &SymbolTable) -> String {
        self.display(table).to_string()
    }

    pub fn to_json(&self, table: &SymbolTable) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(r, s)| json!({ "rho": r.0, "series": s.to_json(table) }))
            .collect();
        json!({
            "order": self.order,
            "operator": self.op.name(),
            "coeffs": coeffs,
        })
    }
}

fn power_cached(
    cache: &mut HashMap<(usize, u32), GenSeries>,
    base: &GenSeries,
    k: usize,
    d: u32,
    basis: &ExponentBasis,
) -> Result<GenSeries> {
    if let Some(p) = cache.get(&(k, d)) {
        return Ok(p.clone());
    }
    let p = if d == 1 {
        base.clone()
    } else {
        power_cached(cache, base, k, d - 1, basis)?.mul(base, basis)?
    };
    cache.insert((k, d), p.clone());
    Ok(p)
}

pub(crate) fn y_monomial(rho: &MultiIndex) -> String {
    let mut parts = Vec::new();
    for (k, &r) in rho.0.iter().enumerate() {
        match r {
            0 => {}
            1 => parts.push(format!("y{k}")),
            _ => parts.push(format!("y{k}^{r}")),
        }
    }
    parts.join("*")
}

pub struct EquationDisplay<'a> {
    p: &'a Equation,
    table: &'a SymbolTable,
}

impl fmt::Display for EquationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        // Highest y-degree first, then by index.
        let mut entries: Vec<_> = self.p.coeffs.iter().filter(|(_, s)| !s.is_zero()).collect();
        entries.sort_by(|a, b| b.0.abs().cmp(&a.0.abs()).then_with(|| b.0.cmp(a.0)));
        for (rho, s) in entries {
            let ym = y_monomial(rho);
            let (neg, body) = if s.len() == 1 {
                let (e, c) = &s.terms()[0];
                let (neg, t) = term_text(c, e, self.table);
                let body = match (ym.is_empty(), t.as_str()) {
                    (true, _) => t,
                    (false, "1") => ym,
                    (false, _) => format!("{t}*{ym}"),
                };
                (neg, body)
            } else {
                let inner = s.to_string_with(self.table);
                (false, if ym.is_empty() { format!("({inner})") } else { format!("({inner})*{ym}") })
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
