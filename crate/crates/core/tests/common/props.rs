//! Property checks run through a deterministic proptest runner, so the property
//! suite and the acceptance target exercise the same cases.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use puiseux_core::dsl::{parse_problem, render_problem, token_spans, DslError, Problem};
use puiseux_core::equation::{CloudEntry, CloudPoint, Equation, MultiIndex};
use puiseux_core::exponent::{Exponent, ExponentBasis};
use puiseux_core::polygon::{build_polygon, element_entries, NewtonPolygon, PolygonElement};
use puiseux_core::scalar::roots::{poly_roots_exact, UniPoly};
use puiseux_core::scalar::{RatInterval, Scalar};
use puiseux_core::series::{GenSeries, OperatorKind};
use puiseux_core::solver::{
    check_admissible, complete, newton_step, rank_audit, Budget, CompleteOptions, Completion, Policy, StepOutcome,
};
use puiseux_core::Error;

use super::fixtures::{rat, tau_basis, CORPUS};
use super::strategies as st;

pub const CASES: u32 = 256;

pub fn run<S: Strategy>(cases: u32, strat: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config { cases, max_global_rejects: cases * 16, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strat, test).map_err(|e| e.to_string())
}

/// Undecidable exponent comparisons reject the case; other errors fail it.
fn ok<T>(r: puiseux_core::Result<T>) -> Result<T, TestCaseError> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::Exponent(e)) => Err(TestCaseError::reject(e.to_string())),
        Err(e) => Err(TestCaseError::fail(e.to_string())),
    }
}

fn cmp(basis: &ExponentBasis, a: &Exponent, b: &Exponent) -> Result<Ordering, TestCaseError> {
    ok(basis.compare(a, b).map_err(Error::from))
}

fn zero(s: &Scalar) -> bool {
    s.is_zero()
}

// ---- scalar -------------------------------------------------------------

pub fn field_axioms(cases: u32) -> Result<(), String> {
    let (_, tau) = tau_basis();
    let f = st::field_scalar(tau);
    run(cases, (f.clone(), f.clone(), f), |(a, b, c)| {
        prop_assert!(zero(&a.add(&b).add(&c).sub(&a.add(&b.add(&c)))));
        prop_assert!(zero(&a.mul(&b).mul(&c).sub(&a.mul(&b.mul(&c)))));
        prop_assert!(zero(&a.mul(&b.add(&c)).sub(&a.mul(&b).add(&a.mul(&c)))));
        prop_assert!(zero(&a.mul(&b).sub(&b.mul(&a))));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            prop_assert!(zero(&b.div(&a).unwrap().mul(&a).sub(&b)));
        }
        let n = a.clone().normalized();
        prop_assert_eq!(n.clone().normalized(), n.clone());
        prop_assert_eq!(n.to_string_with(&tau_basis().0.table), n.normalized().to_string_with(&tau_basis().0.table));
        Ok(())
    })
}

pub fn root_soundness(cases: u32) -> Result<(), String> {
    let (_, tau) = tau_basis();
    let roots = prop::collection::vec(st::scalar_poly(tau), 1..=3);
    let extra = prop_oneof![Just(None), (st::scalar_poly(tau), st::scalar_poly(tau)).prop_map(Some)];
    run(cases, (roots, extra, st::nonzero_scalar(tau)), |(rs, extra, k)| {
        let mut p = UniPoly::constant(k);
        for r in &rs {
            p = p.mul(&UniPoly::linear_root(r));
        }
        if let Some((a, b)) = extra {
            p = p.mul(&UniPoly::new(vec![b, a, Scalar::one()]));
        }
        let found = poly_roots_exact(&p).unwrap();
        for (r, m) in &found.roots {
            prop_assert!(p.eval(r).is_zero());
            let (q, rem) = p.div_rem(&UniPoly::linear_root(r).pow(*m));
            prop_assert!(rem.is_zero());
            prop_assert!(!q.eval(r).is_zero());
        }
        let total: usize = found.roots.iter().map(|r| r.1).sum::<usize>() + found.unresolved.as_ref().map_or(0, |f| f.degree());
        prop_assert_eq!(total, p.degree());
        Ok(())
    })
}

pub fn enclosure_soundness(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    run(cases, (st::field_scalar(tau), 0i64..=10, 0u32..=3), |(s, k, level)| {
        let enc = basis.table.enclosure(tau, level);
        let pt = &enc.lo + (&enc.hi - &enc.lo) * rat(k, 10);
        let Some(v) = s.eval_at(&HashMap::from([(tau, pt)])) else {
            return Err(TestCaseError::reject("pole at the sample point"));
        };
        let Ok(iv) = s.eval_enclosure(&basis.table, level) else {
            return Err(TestCaseError::reject("denominator enclosure meets zero"));
        };
        prop_assert!(iv.contains(&v.re, &v.im), "{:?} not in {:?}", v, iv);
        Ok(())
    })
}

// ---- exponent -----------------------------------------------------------

pub fn exponent_order(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let e = st::exponent(tau);
    run(cases, (e.clone(), e.clone(), e), |(a, b, c)| {
        let o = cmp(&basis, &a, &b)?;
        prop_assert_eq!(cmp(&basis, &b, &a)?, o.reverse());
        prop_assert_eq!(o == Ordering::Equal, a == b);
        prop_assert_eq!(cmp(&basis, &a.add(&c), &b.add(&c))?, o);
        Ok(())
    })
}

pub fn rank_identity(cases: u32) -> Result<(), String> {
    let (mut basis, tau) = tau_basis();
    let mut e = |name: &str, lo, hi| basis.declare(name, RatInterval::new(rat(lo, 100), rat(hi, 100)), None).unwrap();
    let sig = e("sig", 271, 272);
    let ex = (st::small_rat(3, 2), -1i64..=1, -1i64..=1)
        .prop_map(move |(q, a, b)| Exponent::new(q, [(tau, rat(a, 1)), (sig, rat(b, 1))]));
    let v = prop::collection::vec(ex, 0..=3);
    run(cases, (v.clone(), v), |(num, den)| {
        let all: Vec<Exponent> = num.iter().chain(&den).cloned().collect();
        prop_assert_eq!(basis.rational_rank_quotient(&num, &den), basis.rank(&all) - basis.rank(&den));
        prop_assert!(basis.rank(&all) <= 3);
        Ok(())
    })
}

// ---- series -------------------------------------------------------------

pub fn operator_composition(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let mut qb = basis.clone();
    qb.set_q(Scalar::from_int(2)).unwrap();
    let q = OperatorKind::QDifference(Scalar::from_int(2));
    let op = prop_oneof![Just(OperatorKind::Euler), Just(OperatorKind::OrdinaryDx), Just(q)];
    // q^mu is only representable when the rational part of mu is an integer
    let int_exp = (-4i64..=6, prop_oneof![2 => Just(0i64), 1 => -1i64..=2])
        .prop_map(move |(n, k)| Exponent::new(rat(n, 1), [(tau, rat(k, 1))]));
    let qseries = st::series_with(int_exp.clone(), st::nonzero_scalar(tau), 3, basis.clone());
    let strat = op.prop_flat_map(move |op| {
        let (s, mu) = if matches!(op, OperatorKind::QDifference(_)) {
            (qseries.clone().boxed(), int_exp.clone().boxed())
        } else {
            (st::series(tau, basis.clone()).boxed(), st::exponent(tau).boxed())
        };
        (s, Just(op), 0usize..=2, 0usize..=2, mu)
    });
    run(cases, strat, |(s, op, k1, k2, mu)| {
        let b = &qb;
        let both = s.apply_operator(&op, k1 + k2, b).unwrap();
        let seq = s.apply_operator(&op, k2, b).unwrap().apply_operator(&op, k1, b).unwrap();
        prop_assert_eq!(both, seq);
        if !matches!(op, OperatorKind::OrdinaryDx) {
            let f = |k| op.bracket(&mu, k, b).unwrap();
            prop_assert!(zero(&f(k1 + k2).sub(&f(k1).mul(&f(k2)))));
        }
        Ok(())
    })
}

pub fn derivations(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let rational = st::series_with(st::rational_exponent(6), st::nonzero_scalar(tau), 3, basis.clone());
    run(cases, (st::series(tau, basis.clone()), st::series(tau, basis.clone()), rational), |(a, b, r)| {
        let d = |s: &GenSeries| s.formal_derivation(tau);
        let ab = a.mul(&b, &basis).unwrap();
        let rhs = a.mul(&d(&b), &basis).unwrap().add(&d(&a).mul(&b, &basis).unwrap(), &basis).unwrap();
        prop_assert_eq!(d(&ab), rhs);
        prop_assert!(d(&r).is_exact_zero());
        let qbasis = [Exponent::from_int(1), Exponent::generator(tau)];
        prop_assert!(r.formal_derivation_in(&qbasis, 1).unwrap().is_exact_zero());
        prop_assert_eq!(a.formal_derivation_in(&qbasis, 1).unwrap(), d(&a));
        prop_assert_eq!(ab.ord().unwrap().clone(), a.ord().unwrap().add(b.ord().unwrap()));
        Ok(())
    })
}

// ---- equation -----------------------------------------------------------

fn indices(order: usize, degree: u32) -> Vec<MultiIndex> {
    let mut out = vec![vec![]];
    for _ in 0..=order {
        out = out.into_iter().flat_map(|v: Vec<u32>| (0..=degree).map(move |k| [v.clone(), vec![k]].concat())).collect();
    }
    out.into_iter().filter(|v| v.iter().sum::<u32>() <= degree).map(MultiIndex).collect()
}

/// `D_j(P[s]_rho) = sum_k (rho_k + 1) P[s]_(rho + e_k) D_j(s^(k))`.
pub fn derivation_identity(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    run(cases, (st::equation(tau, basis.clone()), st::segment(tau, basis.clone())), |(p, s)| {
        let q = p.substitute_polynomial(&s, &basis).unwrap();
        let n = p.order();
        let ds: Vec<GenSeries> = (0..=n).map(|k| s.apply_operator(p.op(), k, &basis).unwrap().formal_derivation(tau)).collect();
        for rho in indices(n, p.degree()) {
            let lhs = q.coeff(&rho).formal_derivation(tau);
            let mut rhs = GenSeries::zero();
            for (k, dk) in ds.iter().enumerate() {
                let up = rho.add(&MultiIndex::unit(n, k));
                let t = q.coeff(&up).mul(dk, &basis).unwrap().scale(&Scalar::from_int(rho.0[k] as i64 + 1));
                rhs = rhs.add(&t, &basis).unwrap();
            }
            prop_assert_eq!(&lhs, &rhs, "rho = {:?}", rho);
        }
        Ok(())
    })
}

pub fn substitution_laws(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let mono = (st::positive_exponent(tau), st::nonzero_scalar(tau));
    run(cases, (st::equation(tau, basis.clone()), mono.clone(), mono, st::segment(tau, basis.clone())), |(p, a, b, r)| {
        prop_assume!(a.0 != b.0);
        let ab = GenSeries::from_terms([a.clone(), b.clone()], &basis).unwrap();
        let once = p.substitute_polynomial(&ab, &basis).unwrap();
        let twice = p.substitute_monomial(&a.1, &a.0, &basis).unwrap().substitute_monomial(&b.1, &b.0, &basis).unwrap();
        prop_assert_eq!(once, twice);
        for k in 0..=p.order() {
            let lhs = p.substitute_polynomial(&r, &basis).unwrap().partial_derivative(k).unwrap();
            let rhs = p.partial_derivative(k).unwrap().substitute_polynomial(&r, &basis).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        let direct = super::oracle::expand(&p, &r, &basis);
        prop_assert_eq!(p.evaluate_residual(&r, &basis).unwrap(), direct);
        Ok(())
    })
}

// ---- polygon ------------------------------------------------------------

fn value(p: &CloudPoint, mu: &Exponent) -> Exponent {
    p.alpha.add(&mu.scale_int(p.height as i64))
}

/// Supporting line and elements against a minimum over every cloud point.
pub fn polygon_oracle(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let mus = prop::collection::vec(st::exponent(tau), 20);
    run(cases, (st::cloud(tau), mus), |(mut cloud, mus)| {
        cloud.sort_by_key(|a| (a.height, a.alpha.to_string_with(&basis.table)));
        cloud.dedup();
        let poly = ok(build_polygon(&cloud, &basis))?;
        let entries: Vec<CloudEntry> = cloud.iter().map(|p| CloudEntry { point: p.clone(), terms: vec![] }).collect();
        for mu in &mus {
            let mut best = value(&cloud[0], mu);
            for p in &cloud[1..] {
                let v = value(p, mu);
                if cmp(&basis, &v, &best)? == Ordering::Less {
                    best = v;
                }
            }
            prop_assert_eq!(ok(poly.supporting_line(mu, &basis))?, best.clone());
            let mut attaining = Vec::new();
            for p in &cloud {
                match cmp(&basis, &value(p, mu), &best)? {
                    Ordering::Equal => attaining.push(p.clone()),
                    Ordering::Greater => {}
                    Ordering::Less => prop_assert!(false, "point below the supporting line"),
                }
            }
            let got: Vec<CloudPoint> = ok(element_entries(&entries, mu, &basis))?.into_iter().map(|e| e.point).collect();
            prop_assert_eq!(got.len(), attaining.len());
            prop_assert!(got.iter().all(|p| attaining.contains(p)));
            let el = ok(poly.element_of_coslope(mu, &basis))?;
            let hmax = attaining.iter().map(|p| p.height).max().unwrap();
            let hmin = attaining.iter().map(|p| p.height).min().unwrap();
            prop_assert_eq!(el.top().height, hmax);
            prop_assert_eq!(el.bot().height, hmin);
            prop_assert_eq!(el.is_side(), hmax != hmin);
            prop_assert!(attaining.contains(el.top()) && attaining.contains(el.bot()));
        }
        Ok(())
    })
}

fn element(p: &Equation, mu: &Exponent, basis: &ExponentBasis) -> Result<(NewtonPolygon, PolygonElement), TestCaseError> {
    let poly = ok(build_polygon(&p.cloud_points(), basis))?;
    let el = ok(poly.element_of_coslope(mu, basis))?;
    Ok((poly, el))
}

fn on_border(poly: &NewtonPolygon, pt: &CloudPoint, basis: &ExponentBasis) -> Result<bool, TestCaseError> {
    if pt.height == poly.hull[0].height || poly.hull.contains(pt) {
        return Ok(true);
    }
    for s in &poly.sides {
        if (s.lo.height..=s.hi.height).contains(&pt.height) && ok(poly.supporting_line(&s.coslope, basis))? == value(pt, &s.coslope) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `Q = P[c x^nu]`: the polygon of `Q` lies right of `L_nu(P)`, agrees with `N(P)`
/// above `Top(E_nu(P))`, loses its bottom height exactly at roots of `Phi`, and
/// heights drop along `Top(E_nu(P)) >= Bot(E_nu(Q)) >= Top(E_mu(Q))`.
pub fn change_of_variables(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let strat = (st::equation(tau, basis.clone()), st::positive_exponent(tau), st::nonzero_scalar(tau), any::<bool>(), st::positive_exponent(tau));
    run(cases, strat, |(p, nu, c, use_root, delta)| {
        let phi = ok(p.characteristic_polynomial(&nu, &basis))?;
        let c = match (use_root, phi.is_zero()) {
            (true, false) => poly_roots_exact(&phi).unwrap().nonzero().next().map(|r| r.0.clone()).unwrap_or(c),
            _ => c,
        };
        let q = ok(p.substitute_monomial(&c, &nu, &basis))?;
        let (np, ep) = element(&p, &nu, &basis)?;
        let a0 = ok(np.supporting_line(&nu, &basis))?;
        for pt in q.cloud_points() {
            prop_assert_ne!(cmp(&basis, &value(&pt, &nu), &a0)?, Ordering::Less, "part 1");
        }
        let (nq, eq) = element(&q, &nu, &basis)?;
        let h = ep.top().height;
        prop_assert_eq!(ok(nq.supporting_line(&nu, &basis))?, a0.clone());
        prop_assert_eq!(eq.top(), ep.top());
        let above = |n: &NewtonPolygon| n.hull.iter().filter(|v| v.height >= h).cloned().collect::<Vec<_>>();
        prop_assert_eq!(above(&np), above(&nq));
        let qcloud: BTreeMap<String, Vec<(MultiIndex, Scalar)>> =
            q.cloud().into_iter().map(|e| (e.point.to_string_with(&basis.table), e.terms)).collect();
        for e in p.cloud() {
            if e.point.height >= h && on_border(&np, &e.point, &basis)? {
                prop_assert_eq!(qcloud.get(&e.point.to_string_with(&basis.table)), Some(&e.terms), "part 2 coefficients");
            }
        }
        prop_assert_eq!(eq.bot().height == 0, !phi.eval(&c).is_zero(), "part 3");
        let mu = nu.add(&delta);
        let (_, emu) = element(&q, &mu, &basis)?;
        prop_assert!(ep.top().height >= eq.bot().height && eq.bot().height >= emu.top().height, "part 4");
        Ok(())
    })
}

// ---- solver -------------------------------------------------------------

/// Checks every branch of a completion: rank audit, admissibility of the prefix,
/// bottom height along the chain, non-increasing pivot heights and the residual bound.
pub fn audit_completion(p: &Equation, c: &Completion, basis: &ExponentBasis) -> Result<usize, String> {
    for b in &c.branches {
        let prefix = &b.branch.prefix;
        let show = || prefix.to_string_with(&basis.table);
        let audit = rank_audit(p, prefix, basis);
        if !audit.ok {
            return Err(format!("rank {} > {} for {}", audit.rank, audit.bound, show()));
        }
        let report = check_admissible(p, prefix, basis).map_err(|e| format!("{e} for {}", show()))?;
        if !report.admissible {
            return Err(format!("branch prefix {} is not admissible", show()));
        }
        let mut state = p.clone();
        let mut last_top: Option<u32> = None;
        for (nu, cf) in prefix.terms() {
            let poly = build_polygon(&state.cloud_points(), basis).map_err(|e| e.to_string())?;
            let top = poly.element_of_coslope(nu, basis).map_err(|e| e.to_string())?.top().clone();
            if last_top.is_some_and(|h| top.height > h) {
                return Err(format!("pivot height increases at {} in {}", nu.to_string_with(&basis.table), show()));
            }
            last_top = Some(top.height);
            state = state.substitute_monomial(cf, nu, basis).map_err(|e| e.to_string())?;
            let next = state.cloud_points();
            if next.is_empty() {
                break;
            }
            let np = build_polygon(&next, basis).map_err(|e| e.to_string())?;
            if np.element_of_coslope(nu, basis).map_err(|e| e.to_string())?.bot().height < 1 {
                return Err(format!("bottom height 0 after {} in {}", nu.to_string_with(&basis.table), show()));
            }
            let res = state.coeff(&MultiIndex::zero(p.order()));
            if let Ok(o) = res.ord() {
                let bound = value(&top, nu);
                if basis.lt(o, &bound).map_err(|e| e.to_string())? {
                    return Err(format!("residual order below the pivot bound in {}", show()));
                }
            }
        }
    }
    Ok(c.branches.len())
}

pub fn small_options() -> CompleteOptions {
    CompleteOptions { budget: Budget { max_terms: 4, max_exponent: None, max_branches: 6 }, ..CompleteOptions::default() }
}

pub fn branch_invariants(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let eq = prop_oneof![st::rational_equation(basis.clone()), st::equation(tau, basis.clone())];
    run(cases, eq, |p| {
        let c = ok(complete(&p, &GenSeries::zero(), &small_options(), &basis))?;
        audit_completion(&p, &c, &basis).map_err(TestCaseError::fail)?;
        Ok(())
    })
}

/// Builds `r` by following Newton steps, picking extensions by `picks`.
fn newton_prefix(p: &Equation, picks: &[usize], basis: &ExponentBasis) -> Result<GenSeries, TestCaseError> {
    let mut b = puiseux_core::solver::BranchState::root(p);
    for &k in picks {
        match ok(newton_step(&b, Policy::default(), &Scalar::one(), basis))? {
            StepOutcome::Extensions { list, .. } => b = ok(b.extend(&list[k % list.len()], basis))?,
            _ => break,
        }
    }
    Ok(b.prefix)
}

/// Step-by-step conditions `Phi_(P_i; nu_i)(c_i) = 0` against the bottom-height criterion, computed here
/// from scratch, and against `check_admissible`.
pub fn admissibility_agreement(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let picks = prop::collection::vec(0usize..4, 1..=3);
    let strat = (st::equation(tau, basis.clone()), st::segment(tau, basis.clone()), picks, any::<bool>());
    run(cases, strat, |(p, random_r, picks, from_newton)| {
        let r = if from_newton { newton_prefix(&p, &picks, &basis)? } else { random_r };
        prop_assume!(!r.is_empty());
        let report = ok(check_admissible(&p, &r, &basis))?;
        let mut state = p.clone();
        let mut conditions = true;
        for (nu, c) in r.terms() {
            let phi = ok(state.characteristic_polynomial(nu, &basis))?;
            conditions &= phi.eval(c).is_zero();
            state = ok(state.substitute_monomial(c, nu, &basis))?;
        }
        let nu_k = &r.last().unwrap().0;
        let (_, el) = element(&state, nu_k, &basis)?;
        let bottom = el.bot().height >= 1;
        prop_assert_eq!(conditions, bottom);
        prop_assert_eq!(report.admissible, conditions);
        if from_newton {
            prop_assert!(report.admissible);
        }
        Ok(())
    })
}

// ---- dsl ----------------------------------------------------------------

pub fn dsl_round_trip(cases: u32) -> Result<(), String> {
    let (basis, tau) = tau_basis();
    let mut qb = basis.clone();
    qb.set_q(Scalar::from_int(2)).unwrap();
    let op = prop_oneof![
        Just(OperatorKind::Euler),
        Just(OperatorKind::OrdinaryDx),
        Just(OperatorKind::QDifference(Scalar::from_int(2)))
    ];
    let strat = op.prop_flat_map(move |op| {
        let b = if matches!(op, OperatorKind::QDifference(_)) { qb.clone() } else { basis.clone() };
        (
            Just(b.clone()),
            (0usize..=1).prop_flat_map({
                let (op, b) = (op.clone(), b.clone());
                move |n| st::equation_with(n, op.clone(), st::field_scalar(tau).prop_filter("nonzero", |s| !s.is_zero()), b.clone())
            }),
            prop::option::of(st::series(tau, b)),
            (1usize..=20, prop::option::of(st::positive_exponent(tau)), 1usize..=99),
            any::<bool>(),
            prop::option::of(0u32..=12),
        )
    });
    run(cases, strat, |(b, equation, segment, (terms, exp, branches), policy, precision)| {
        prop_assume!(equation.involves_y(equation.order()));
        let p = Problem {
            op: equation.op().clone(),
            basis: b,
            equation,
            segment,
            budget: Budget { max_terms: terms, max_exponent: exp, max_branches: branches },
            policy: if policy { Policy::SidesOnly } else { Policy::SidesAndVertexRoots },
            precision,
        };
        let text = render_problem(&p);
        let back = parse_problem(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &p, "{}", text);
        prop_assert_eq!(render_problem(&back), text);
        Ok(())
    })
}

/// Deleting one token never moves a parse error before the token preceding the
/// deletion: the prefix is parsed exactly as before.
pub fn dsl_deletions(cases: u32) -> Result<(), String> {
    run(cases, (0..CORPUS.len(), any::<prop::sample::Index>()), |(f, idx)| {
        let src = CORPUS[f];
        let spans = token_spans(src).unwrap();
        let k = idx.index(spans.len());
        let chars: Vec<char> = src.chars().collect();
        let (_, range) = &spans[k];
        let edited: String = chars[..range.start].iter().chain(&chars[range.end..]).collect();
        let floor = spans[k.saturating_sub(1)].0;
        match parse_problem(&edited) {
            Err(DslError::Parse(e)) => prop_assert!(e.pos >= floor, "error at {} before {} deleting token {}", e.pos, floor, k),
            Err(DslError::Semantic { .. }) | Ok(_) => {}
        }
        Ok(())
    })
}

/// Full list, in the order the acceptance target reports them.
pub type Property = fn(u32) -> Result<(), String>;

pub fn all() -> Vec<(&'static str, Property)> {
    vec![
        ("derivation identity D_j(P[s]_rho)", derivation_identity),
        ("polygon supporting-line oracle", polygon_oracle),
        ("change of variables parts 1-4", change_of_variables),
        ("rank audit and branch invariants", branch_invariants),
        ("admissibility double characterization", admissibility_agreement),
        ("field axioms and normalization", field_axioms),
        ("root soundness", root_soundness),
        ("enclosure soundness", enclosure_soundness),
        ("exponent order", exponent_order),
        ("rank quotient identity", rank_identity),
        ("operator composition", operator_composition),
        ("derivations and ord", derivations),
        ("substitution laws", substitution_laws),
        ("dsl round trip", dsl_round_trip),
        ("dsl deletions", dsl_deletions),
    ]
}
