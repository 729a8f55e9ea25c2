use std::path::Path;

use anyhow::{anyhow, Context, Result};
use serde_json::{json, Value};

use puiseux_core::dsl::{parse_exponent, parse_scalar, parse_series, Problem};
use puiseux_core::equation::Equation;
use puiseux_core::polygon::{build_polygon, to_svg};
use puiseux_core::series::GenSeries;
use puiseux_core::solver::{
    check_admissible, complete, convergence_certificate_with_fallback, rank_audit, stabilization_check, stabilized_extend,
    autonomous_first_order, BranchOutcome, BranchState, CompleteOptions, Completion, Policy,
};

use crate::report::{self, RunReport};
use crate::{BudgetArgs, PolicyArg, EXIT_OBSTRUCTION, EXIT_OK, EXIT_UNDECIDED};

fn options(p: &Problem, args: &BudgetArgs) -> Result<CompleteOptions> {
    let mut opts = CompleteOptions { budget: p.budget.clone(), policy: p.policy, ..Default::default() };
    if let Some(k) = args.budget_terms {
        opts.budget.max_terms = k;
    }
    if let Some(n) = args.budget_branches {
        opts.budget.max_branches = n;
    }
    if let Some(e) = &args.budget_exponent {
        opts.budget.max_exponent = Some(parse_exponent(p, e).map_err(|e| anyhow!("--budget-exponent: {e}"))?);
    }
    if let Some(policy) = args.policy {
        opts.policy = match policy {
            PolicyArg::SidesOnly => Policy::SidesOnly,
            PolicyArg::SidesAndVertexRoots => Policy::SidesAndVertexRoots,
        };
    }
    Ok(opts)
}

/// `--at` if given, else the file's segment, else the empty prefix.
fn prefix(p: &Problem, at: Option<&str>) -> Result<GenSeries> {
    match at {
        Some(s) => parse_series(p, s).map_err(|e| anyhow!("--at: {e}")),
        None => Ok(p.segment.clone().unwrap_or_else(GenSeries::zero)),
    }
}

fn budget_json(opts: &CompleteOptions, p: &Problem) -> Value {
    let t = &p.basis.table;
    json!({
        "terms": opts.budget.max_terms,
        "exponent": report::opt_exponent(opts.budget.max_exponent.as_ref(), t),
        "branches": opts.budget.max_branches,
        "policy": opts.policy.name(),
    })
}

/// Reports every branch and maps the completion to an exit code.
fn report_completion(p: &Problem, eq: &Equation, c: &Completion, rep: &mut RunReport) -> u8 {
    let t = &p.basis.table;
    let mut out = Vec::new();
    for (k, b) in c.branches.iter().enumerate() {
        let audit = rank_audit(eq, &b.branch.prefix, &p.basis);
        let ord = b.residual_order.as_ref().map_or("none".to_string(), |e| e.to_string_with(t));
        rep.say(format!("branch {k}: {} (residual order {ord})", b.outcome.name()));
        rep.say(format!("  {}", b.branch.prefix.to_string_with(t)));
        if let BranchOutcome::Obstruction(o) = &b.outcome {
            let at = o.nu.as_ref().map_or("-".to_string(), |e| e.to_string_with(t));
            rep.say(format!("  obstruction at exponent {at}: {}", o.reason));
        }
        out.push(report::branch(b, &audit, t));
    }
    rep.set("branches", Value::Array(out));
    rep.set("rank_hypothesis", c.rank_hypothesis.into());
    let survivors = c.survivors().count();
    let open = c
        .branches
        .iter()
        .any(|b| matches!(b.outcome, BranchOutcome::NeedsAlgebraicExtension { .. } | BranchOutcome::Undecided(_)));
    let (kind, code) = if survivors > 0 {
        ("survivors", EXIT_OK)
    } else if open {
        ("undecided", EXIT_UNDECIDED)
    } else {
        ("obstruction", EXIT_OBSTRUCTION)
    };
    rep.say(format!("{survivors} surviving branch(es) of {}", c.branches.len()));
    rep.set("outcome", kind.into());
    code
}

fn not_admissible(p: &Problem, r: &GenSeries, rep: &mut RunReport) -> Result<Option<u8>> {
    let a = check_admissible(&p.equation, r, &p.basis)?;
    let t = &p.basis.table;
    let steps: Vec<Value> = a
        .steps
        .iter()
        .map(|s| {
            json!({
                "nu": report::exponent(&s.nu, t),
                "c": report::scalar(&s.c, t),
                "phi": report::poly(&s.phi, t, "C"),
                "value": report::scalar(&s.value, t),
                "element": s.element.as_ref().map_or(Value::Null, |e| report::element(e, t)),
            })
        })
        .collect();
    rep.set(
        "admissibility",
        json!({
            "admissible": a.admissible,
            "first_failure": a.first_failure,
            "final_bottom": a.final_bottom.as_ref().map_or(Value::Null, |v| report::point(v, t)),
            "steps": steps,
        }),
    );
    if a.admissible {
        return Ok(None);
    }
    let k = a.first_failure.unwrap_or(0);
    rep.say(format!("{} is not admissible (term {k})", r.to_string_with(t)));
    rep.set("outcome", "not_admissible".into());
    Ok(Some(EXIT_OBSTRUCTION))
}

pub fn branches(p: &Problem, args: &BudgetArgs, rep: &mut RunReport) -> Result<u8> {
    let opts = options(p, args)?;
    rep.set("budget", budget_json(&opts, p));
    let r = prefix(p, None)?;
    if let Some(code) = not_admissible(p, &r, rep)? {
        return Ok(code);
    }
    let c = complete(&p.equation, &r, &opts, &p.basis)?;
    Ok(report_completion(p, &p.equation, &c, rep))
}

pub fn admissible(p: &Problem, at: Option<&str>, rep: &mut RunReport) -> Result<u8> {
    let r = prefix(p, at)?;
    if let Some(code) = not_admissible(p, &r, rep)? {
        return Ok(code);
    }
    rep.say(format!("{} is admissible", r.to_string_with(&p.basis.table)));
    rep.set("outcome", "admissible".into());
    Ok(EXIT_OK)
}

pub fn polygon(
    p: &Problem,
    at: Option<&str>,
    lines: &[String],
    svg: Option<&Path>,
    ascii: bool,
    rep: &mut RunReport,
) -> Result<u8> {
    let t = &p.basis.table;
    let r = match at {
        Some(s) => parse_series(p, s).map_err(|e| anyhow!("--at: {e}"))?,
        None => GenSeries::zero(),
    };
    if let Some(code) = not_admissible(p, &r, rep)? {
        return Ok(code);
    }
    let mus = lines
        .iter()
        .map(|s| parse_exponent(p, s).map_err(|e| anyhow!("--line: {e}")))
        .collect::<Result<Vec<_>>>()?;
    let state = p.equation.substitute_polynomial(&r, &p.basis)?;
    let cloud = state.cloud_points();
    let poly = build_polygon(&cloud, &p.basis)?;
    rep.say(format!("N(P[{}])", r.to_string_with(t)));
    rep.say(format!("vertices: {}", poly.hull.iter().map(|v| v.to_string_with(t)).collect::<Vec<_>>().join(" ")));
    for s in &poly.sides {
        rep.say(format!("side {} -- {} co-slope {}", s.hi.to_string_with(t), s.lo.to_string_with(t), s.coslope.display(t)));
    }
    let mut supporting = Vec::new();
    for mu in &mus {
        let a0 = poly.supporting_line(mu, &p.basis)?;
        let el = poly.element_of_coslope(mu, &p.basis)?;
        rep.say(format!("L_{}: alpha0 = {}, E = {}", mu.display(t), a0.display(t), el.to_string_with(t)));
        supporting.push(json!({ "mu": report::exponent(mu, t), "alpha0": report::exponent(&a0, t), "element": report::element(&el, t) }));
    }
    rep.set(
        "polygon",
        json!({
            "prefix_text": r.to_string_with(t),
            "vertices": poly.hull.iter().map(|v| report::point(v, t)).collect::<Vec<_>>(),
            "sides": poly.sides.iter().map(|s| report::side(s, t)).collect::<Vec<_>>(),
            "supporting_lines": supporting,
        }),
    );
    if ascii {
        for line in poly.to_ascii(&cloud, t, p.basis.budget()).lines() {
            rep.say(line);
        }
    }
    if let Some(out) = svg {
        let body = to_svg(&poly, &cloud, &mus, &p.basis)?;
        std::fs::write(out, body).with_context(|| out.display().to_string())?;
    }
    rep.set("outcome", "polygon".into());
    Ok(EXIT_OK)
}

pub fn rank(p: &Problem, at: Option<&str>, rep: &mut RunReport) -> Result<u8> {
    let r = prefix(p, at)?;
    let a = rank_audit(&p.equation, &r, &p.basis);
    rep.say(format!("rank {} {} order {}", a.rank, if a.ok { "<=" } else { ">" }, a.bound));
    rep.set("rank_audit", report::audit(&a));
    rep.set("prefix_text", r.to_string_with(&p.basis.table).into());
    rep.set("outcome", if a.ok { "within_bound" } else { "exceeds_bound" }.into());
    Ok(if a.ok { EXIT_OK } else { EXIT_OBSTRUCTION })
}

pub fn certify(p: &Problem, terms: usize, rep: &mut RunReport) -> Result<u8> {
    let t = &p.basis.table;
    let r = prefix(p, None)?;
    let a = rank_audit(&p.equation, &r, &p.basis);
    rep.set("segment_audit", report::audit(&a));
    if !a.ok {
        rep.say(format!("rank audit failed on the segment: rank {} > {}", a.rank, a.bound));
        rep.set("outcome", "rank_audit_failed".into());
        return Ok(EXIT_OBSTRUCTION);
    }
    if let Some(code) = not_admissible(p, &r, rep)? {
        return Ok(code);
    }
    let mut opts = CompleteOptions { budget: p.budget.clone(), policy: p.policy, ..Default::default() };
    opts.budget.max_terms = terms;
    let c = complete(&p.equation, &r, &opts, &p.basis)?;
    let Some(b) = c.survivors().next() else {
        rep.say("no surviving branch to certify");
        rep.set("outcome", "no_branch".into());
        return Ok(EXIT_OBSTRUCTION);
    };
    let s = &b.branch.prefix;
    let audit = rank_audit(&p.equation, s, &p.basis);
    rep.say(format!("branch: {}", s.to_string_with(t)));
    rep.say(format!("rank {} {} order {}", audit.rank, if audit.ok { "<=" } else { ">" }, audit.bound));
    rep.set("branch", report::branch(b, &audit, t));
    if !audit.ok {
        rep.set("outcome", "rank_audit_failed".into());
        return Ok(EXIT_OBSTRUCTION);
    }
    let (cert, path) = convergence_certificate_with_fallback(&p.equation, s, &p.basis)?;
    rep.set("certificate", report::certificate(&cert, t));
    rep.set("partials", json!(path));
    match &cert {
        puiseux_core::solver::Certificate::RegularSingular { lambda, .. } => {
            rep.say(format!("RegularSingular (lambda = {})", lambda.display(t)));
        }
        puiseux_core::solver::Certificate::NotCertified { reason, .. } => rep.say(format!("NotCertified: {reason}")),
    }
    rep.set("outcome", if cert.is_regular() { "regular_singular" } else { "not_certified" }.into());
    Ok(if cert.is_regular() { EXIT_OK } else { EXIT_UNDECIDED })
}

pub fn extend_stabilized(p: &Problem, at: Option<&str>, count: usize, rep: &mut RunReport) -> Result<u8> {
    let t = &p.basis.table;
    let r = prefix(p, at)?;
    if let Some(code) = not_admissible(p, &r, rep)? {
        return Ok(code);
    }
    let s = stabilization_check(&p.equation, &r, &p.basis)?;
    rep.set(
        "stabilization",
        json!({
            "stabilized": s.stabilized,
            "pivot": s.pivot.as_ref().map_or(Value::Null, |v| report::point(v, t)),
            "psi": report::poly(&s.psi, t, "mu"),
            "sigma": s.sigma.iter().map(|c| report::scalar(c, t)).collect::<Vec<_>>(),
            "witness": s.witness,
        }),
    );
    if !s.stabilized {
        rep.say(format!("{} is not stabilized: {}", r.to_string_with(t), s.witness.as_deref().unwrap_or("")));
        rep.set("outcome", "not_stabilized".into());
        return Ok(EXIT_UNDECIDED);
    }
    let start = BranchState::from_prefix(&p.equation, &r, &p.basis)?;
    let b = stabilized_extend(&start, count, &p.basis)?;
    rep.say(format!("stabilized; extended by {count} term(s):"));
    rep.say(format!("  {}", b.prefix.to_string_with(t)));
    rep.set("prefix", b.prefix.to_json(t));
    rep.set("prefix_text", b.prefix.to_string_with(t).into());
    rep.set("outcome", "extended".into());
    Ok(EXIT_OK)
}

pub fn autonomous(p: &Problem, x0: &str, c0: &str, args: &BudgetArgs, rep: &mut RunReport) -> Result<u8> {
    let t = &p.basis.table;
    let x0 = parse_scalar(p, x0).map_err(|e| anyhow!("--x0: {e}"))?;
    let c0 = parse_scalar(p, c0).map_err(|e| anyhow!("--c0: {e}"))?;
    let opts = options(p, args)?;
    rep.set("budget", budget_json(&opts, p));
    rep.set("point", json!({ "x0": report::scalar(&x0, t), "c0": report::scalar(&c0, t) }));
    let res = autonomous_first_order(&p.equation, &x0, &c0, &opts, &p.basis)?;
    rep.say(format!("branches in t = x - ({})", x0.display(t)));
    let code = report_completion(p, &p.equation, &res.completion, rep);
    if let Some(b) = res.primary() {
        let (cert, _) = convergence_certificate_with_fallback(&p.equation, &b.branch.prefix, &p.basis)?;
        rep.say(format!("certificate: {}", if cert.is_regular() { "RegularSingular" } else { "NotCertified" }));
        rep.set("certificate", report::certificate(&cert, t));
    }
    Ok(code)
}
