//! Problem files: `puiseux-forge v1` followed by `;`-terminated statements.

mod lexer;
mod parser;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::equation::{Equation, MultiIndex};
use crate::exponent::{precision_budget_from_env, Exponent, ExponentBasis};
use crate::scalar::{RatInterval, RefineHint, Scalar, SymbolKind};
use crate::series::{GenSeries, OperatorKind};
use crate::solver::{Budget, Policy};

use parser::{BinOp, Expr, ExprKind, HintAst, OperatorAst, Parser, StmtKind};
pub use parser::HEADER;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub expected: Vec<String>,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(pos: Pos, expected: Vec<String>, message: &str) -> Self {
        Self { pos, expected, message: message.to_string() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("parse error at {0}")]
    Parse(ParseError),
    #[error("{pos}: {message}")]
    Semantic { pos: Pos, message: String },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Parse(p) => p.pos,
            DslError::Semantic { pos, .. } => *pos,
        }
    }
}

fn semantic<T>(pos: Pos, message: impl Into<String>) -> Result<T, DslError> {
    Err(DslError::Semantic { pos, message: message.into() })
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub basis: ExponentBasis,
    pub op: OperatorKind,
    pub equation: Equation,
    pub segment: Option<GenSeries>,
    pub budget: Budget,
    pub policy: Policy,
    /// Explicit `precision` statement, if any.
    pub precision: Option<u32>,
}

impl PartialEq for Problem {
    fn eq(&self, o: &Self) -> bool {
        let decls = |p: &Problem| -> Vec<_> {
            p.basis
                .table
                .iter()
                .filter(|(_, s)| s.kind == SymbolKind::Additive)
                .map(|(_, s)| (s.name.clone(), s.enclosure.clone(), s.hint.clone()))
                .collect()
        };
        decls(self) == decls(o)
            && self.op == o.op
            && self.equation == o.equation
            && self.segment == o.segment
            && self.budget == o.budget
            && self.policy == o.policy
            && self.precision == o.precision
    }
}

pub fn parse_problem(src: &str) -> Result<Problem, DslError> {
    let toks = lexer::lex(src).map_err(DslError::Parse)?;
    let stmts = Parser::new(toks).program().map_err(DslError::Parse)?;
    resolve(stmts)
}

/// Positions and char ranges of the tokens of `src`, end marker excluded.
pub fn token_spans(src: &str) -> Result<Vec<(Pos, std::ops::Range<usize>)>, ParseError> {
    let toks = lexer::lex(src)?;
    Ok(toks[..toks.len() - 1].iter().map(|t| (t.pos, t.span.0..t.span.1)).collect())
}

fn standalone(p: &Problem, src: &str) -> Result<(Ctx, Expr), DslError> {
    let toks = lexer::lex(src).map_err(DslError::Parse)?;
    let mut parser = Parser::new(toks);
    let e = parser.expr().map_err(DslError::Parse)?;
    parser.end().map_err(DslError::Parse)?;
    Ok((Ctx { basis: p.basis.clone(), op: p.op.clone(), order: p.equation.order() }, e))
}

/// A series in `x` and the symbols of `p`, e.g. a prefix given on the command line.
pub fn parse_series(p: &Problem, src: &str) -> Result<GenSeries, DslError> {
    let (ctx, e) = standalone(p, src)?;
    ctx.series(&e)
}

pub fn parse_exponent(p: &Problem, src: &str) -> Result<Exponent, DslError> {
    let (ctx, e) = standalone(p, src)?;
    ctx.exponent(&e)
}

pub fn parse_scalar(p: &Problem, src: &str) -> Result<Scalar, DslError> {
    let (ctx, e) = standalone(p, src)?;
    ctx.scalar(&e)
}

fn decimal(neg: bool, s: &str, den: Option<&str>) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().unwrap_or_default();
    let scale = BigInt::from(10).pow(frac.len() as u32);
    let mut q = BigRational::new(digits, scale);
    if let Some(d) = den {
        q /= decimal(false, d, None);
    }
    if neg {
        -q
    } else {
        q
    }
}

struct Ctx {
    basis: ExponentBasis,
    op: OperatorKind,
    order: usize,
}

fn resolve(stmts: Vec<parser::Stmt>) -> Result<Problem, DslError> {
    let mut basis = ExponentBasis::new(precision_budget_from_env());
    let mut precision = None;
    for s in &stmts {
        if let StmtKind::Precision(p) = &s.kind {
            if precision.is_some() {
                return semantic(s.pos, "duplicate `precision` statement");
            }
            match p.parse::<u32>() {
                Ok(v) if v <= 16 => precision = Some(v),
                _ => return semantic(s.pos, "precision must be an integer between 0 and 16"),
            }
        }
    }
    if let Some(p) = precision {
        basis.set_budget(p);
    }
    for s in &stmts {
        if let StmtKind::Transcendental { name, lo, hi, hint } = &s.kind {
            if is_reserved(name) {
                return semantic(s.pos, format!("`{name}` is reserved"));
            }
            let lo = decimal(lo.0, &lo.1, lo.2.as_deref());
            let hi = decimal(hi.0, &hi.1, hi.2.as_deref());
            if lo >= hi {
                return semantic(s.pos, format!("enclosure of `{name}` must satisfy lo < hi"));
            }
            let hint = match hint {
                None => None,
                Some(HintAst::Digits(d)) => Some(RefineHint::Digits(d.clone())),
                Some(HintAst::Multiple { constant, num, den }) => {
                    let k = decimal(false, num, Some(den));
                    if k.is_zero() {
                        return semantic(s.pos, "refinement multiple must be nonzero");
                    }
                    Some(if constant == "pi" { RefineHint::PiMultiple(k) } else { RefineHint::EMultiple(k) })
                }
            };
            if let Err(e) = basis.declare(name, RatInterval::new(lo, hi), hint) {
                return semantic(s.pos, e.to_string());
            }
        }
    }
    let mut op_stmt = None;
    let mut eq_stmt = None;
    let mut seg_stmt = None;
    let mut budget_stmt = None;
    let mut policy_stmt = None;
    for s in &stmts {
        let slot = match &s.kind {
            StmtKind::Operator(_) => &mut op_stmt,
            StmtKind::Equation(_) => &mut eq_stmt,
            StmtKind::Segment(_) => &mut seg_stmt,
            StmtKind::Budget(_) => &mut budget_stmt,
            StmtKind::Policy(_) => &mut policy_stmt,
            _ => continue,
        };
        if slot.is_some() {
            return semantic(s.pos, "duplicate statement");
        }
        *slot = Some(s);
    }
    let Some(eq_stmt) = eq_stmt else {
        return semantic(Pos { line: 1, col: 1 }, "missing `equation` statement");
    };
    let StmtKind::Equation(eq_expr) = &eq_stmt.kind else { unreachable!() };
    let order = match max_y(eq_expr) {
        Some(n) => n,
        None => return semantic(eq_stmt.pos, "equation must involve y0..yn"),
    };
    let mut ctx = Ctx { basis, op: OperatorKind::Euler, order };
    let Some(op_stmt) = op_stmt else {
        return semantic(Pos { line: 1, col: 1 }, "missing `operator` statement");
    };
    let StmtKind::Operator(op_ast) = &op_stmt.kind else { unreachable!() };
    ctx.op = match op_ast {
        OperatorAst::Dx => OperatorKind::OrdinaryDx,
        OperatorAst::Euler => OperatorKind::Euler,
        OperatorAst::QDiff(e) => {
            let q = ctx.scalar(e)?;
            if q.is_zero() {
                return semantic(e.pos, "q must be nonzero");
            }
            let op = OperatorKind::QDifference(q.clone());
            if op.q_modulus_vs_one(&ctx.basis).is_none() {
                return semantic(e.pos, "|q| must differ from 1 (could not certify |q| != 1)");
            }
            if let Err(err) = ctx.basis.set_q(q) {
                return semantic(e.pos, err.to_string());
            }
            op
        }
    };
    let equation = ctx.eval(eq_expr)?;
    if equation.is_zero() {
        return semantic(eq_stmt.pos, "equation is identically zero");
    }
    let segment = match seg_stmt {
        None => None,
        Some(s) => {
            let StmtKind::Segment(e) = &s.kind else { unreachable!() };
            Some(ctx.series(e)?)
        }
    };
    let mut budget = Budget::default();
    if let Some(s) = budget_stmt {
        let StmtKind::Budget(items) = &s.kind else { unreachable!() };
        for (key, e, pos) in items {
            match key.as_str() {
                "terms" | "branches" => {
                    let v = ctx.scalar(e)?.as_rational().filter(|q| q.is_integer() && q.is_positive());
                    let Some(v) = v.and_then(|q| num_traits::ToPrimitive::to_usize(q.numer())) else {
                        return semantic(*pos, format!("`{key}` must be a positive integer"));
                    };
                    if key == "terms" {
                        budget.max_terms = v;
                    } else {
                        budget.max_branches = v;
                    }
                }
                _ => budget.max_exponent = Some(ctx.exponent(e)?),
            }
        }
    }
    let policy = match policy_stmt {
        None => Policy::default(),
        Some(s) => {
            let StmtKind::Policy(name) = &s.kind else { unreachable!() };
            match name.as_str() {
                "sides_only" => Policy::SidesOnly,
                "sides_and_vertex_roots" => Policy::SidesAndVertexRoots,
                _ => return semantic(s.pos, format!("unknown policy `{name}`")),
            }
        }
    };
    Ok(Problem { basis: ctx.basis, op: ctx.op, equation, segment, budget, policy, precision })
}

fn is_reserved(name: &str) -> bool {
    name == "x" || name == "i" || name == "q" || y_index(name).is_some()
}

fn y_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('y')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

fn max_y(e: &Expr) -> Option<usize> {
    match &e.kind {
        ExprKind::Num(_) => None,
        ExprKind::Ident(s) => y_index(s),
        ExprKind::Neg(a) => max_y(a),
        ExprKind::Bin(_, a, b) | ExprKind::Pow(a, b) => match (max_y(a), max_y(b)) {
            (Some(x), Some(y)) => Some(x.max(y)),
            (x, y) => x.or(y),
        },
    }
}

impl Ctx {
    fn konst(&self, s: GenSeries) -> Equation {
        Equation::constant(self.order, self.op.clone(), s)
    }

    fn wrap(&self, pos: Pos, r: crate::Result<Equation>) -> Result<Equation, DslError> {
        r.or_else(|e| semantic(pos, e.to_string()))
    }

    fn eval(&self, e: &Expr) -> Result<Equation, DslError> {
        let b = &self.basis;
        match &e.kind {
            ExprKind::Num(s) => Ok(self.konst(GenSeries::constant(Scalar::from_rational(decimal(false, s, None))))),
            ExprKind::Ident(name) => {
                if name == "x" {
                    return Ok(self.konst(GenSeries::monomial(Scalar::one(), Exponent::from_int(1))));
                }
                if name == "i" {
                    return Ok(self.konst(GenSeries::constant(Scalar::i())));
                }
                if let Some(k) = y_index(name) {
                    return Ok(Equation::y(self.order, self.op.clone(), k));
                }
                if name == "q" {
                    return match b.q() {
                        Some(q) => Ok(self.konst(GenSeries::constant(q.clone()))),
                        None => semantic(e.pos, "`q` is only defined after `operator qdiff q = ...`"),
                    };
                }
                match b.lookup(name) {
                    Some(id) => Ok(self.konst(GenSeries::constant(Scalar::symbol(id)))),
                    None => semantic(e.pos, format!("undeclared symbol `{name}`")),
                }
            }
            ExprKind::Neg(a) => Ok(self.eval(a)?.neg()),
            ExprKind::Bin(op, l, r) => {
                let (lv, rv) = (self.eval(l)?, self.eval(r)?);
                match op {
                    BinOp::Add => self.wrap(e.pos, lv.add(&rv, b)),
                    BinOp::Sub => self.wrap(e.pos, lv.sub(&rv, b)),
                    BinOp::Mul => self.wrap(e.pos, lv.mul(&rv, b)),
                    BinOp::Div => {
                        let Some((c, ex)) = monomial_of(&rv) else {
                            return semantic(r.pos, "can only divide by a nonzero monomial c*x^e");
                        };
                        let inv = c.inv().map_err(|err| DslError::Semantic { pos: r.pos, message: err.to_string() })?;
                        self.wrap(e.pos, lv.mul(&self.konst(GenSeries::monomial(inv, ex.neg())), b))
                    }
                }
            }
            ExprKind::Pow(base, ex) => {
                let k = self.scalar(ex)?;
                let bv = self.eval(base)?;
                if let Some(n) = k.as_rational().filter(|q| q.is_integer() && !q.is_negative()) {
                    let Some(n) = num_traits::ToPrimitive::to_u32(n.numer()).filter(|&n| n <= 64) else {
                        return semantic(ex.pos, "exponent too large");
                    };
                    return self.wrap(e.pos, bv.pow(n, b));
                }
                let Some((c, be)) = monomial_of(&bv) else {
                    return semantic(ex.pos, "non-integer powers need a monomial base c*x^e");
                };
                let Some(kexp) = Exponent::from_scalar(&k) else {
                    return semantic(ex.pos, "exponent must be rational or linear in the declared symbols");
                };
                if !kexp.irr().iter().all(|(s, _)| b.generators().contains(s)) {
                    return semantic(ex.pos, "exponent uses a symbol that is not a declared generator");
                }
                let coeff = if c.is_one() {
                    Scalar::one()
                } else if let Some(q) = kexp.as_rational() {
                    c.pow_rational(q).or_else(|err| semantic(ex.pos, err.to_string()))?
                } else if b.q() == Some(&c) {
                    b.q_to_the(&c, &kexp).or_else(|err| semantic(ex.pos, err.to_string()))?
                } else {
                    return semantic(ex.pos, "irrational powers of a coefficient other than q are not representable");
                };
                let new_exp = if be.is_zero() {
                    Exponent::zero()
                } else if be == Exponent::from_int(1) {
                    kexp
                } else if let Some(q) = kexp.as_rational() {
                    be.scale(q)
                } else {
                    return semantic(ex.pos, "x^e may be raised only to rational powers when e != 1");
                };
                Ok(self.konst(GenSeries::monomial(coeff, new_exp)))
            }
        }
    }

    fn series(&self, e: &Expr) -> Result<GenSeries, DslError> {
        let v = self.eval(e)?;
        if v.coeffs().keys().any(|r| !r.is_zero()) {
            return semantic(e.pos, "expected an expression in x and the declared symbols");
        }
        Ok(v.coeff(&MultiIndex::zero(self.order)))
    }

    fn scalar(&self, e: &Expr) -> Result<Scalar, DslError> {
        let s = self.series(e)?;
        match s.terms() {
            [] => Ok(Scalar::zero()),
            [(ex, c)] if ex.is_zero() => Ok(c.clone()),
            _ => semantic(e.pos, "expected a constant"),
        }
    }

    fn exponent(&self, e: &Expr) -> Result<Exponent, DslError> {
        let s = self.scalar(e)?;
        match Exponent::from_scalar(&s) {
            Some(x) if x.irr().iter().all(|(g, _)| self.basis.generators().contains(g)) => Ok(x),
            _ => semantic(e.pos, "expected an exponent: rational or linear in the declared symbols"),
        }
    }
}

fn monomial_of(p: &Equation) -> Option<(Scalar, Exponent)> {
    if p.coeffs().len() != 1 {
        return None;
    }
    let (rho, s) = p.coeffs().iter().next()?;
    if !rho.is_zero() || s.valid_to().is_some() {
        return None;
    }
    match s.terms() {
        [(e, c)] => Some((c.clone(), e.clone())),
        _ => None,
    }
}

fn render_rational(q: &BigRational) -> String {
    // decimals when exact, fractions otherwise
    let mut d = q.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&d % 2u32).is_zero() {
        d /= 2u32;
        twos += 1;
    }
    while (&d % 5u32).is_zero() {
        d /= 5u32;
        fives += 1;
    }
    if !d.is_one() {
        return format!("{}/{}", q.numer(), q.denom());
    }
    let k = twos.max(fives);
    if k == 0 {
        return q.numer().to_string();
    }
    let scaled = q * BigRational::from_integer(BigInt::from(10).pow(k));
    let n = scaled.to_integer();
    let neg = n.is_negative();
    let digits = n.abs().to_string();
    let digits = format!("{:0>width$}", digits, width = k as usize + 1);
    let (a, b) = digits.split_at(digits.len() - k as usize);
    format!("{}{a}.{b}", if neg { "-" } else { "" })
}

/// Canonical text; `parse_problem(render_problem(p)) == p`.
pub fn render_problem(p: &Problem) -> String {
    let table = &p.basis.table;
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    if let Some(k) = p.precision {
        out.push_str(&format!("precision {k};\n"));
    }
    for (_, s) in table.iter().filter(|(_, s)| s.kind == SymbolKind::Additive) {
        out.push_str(&format!(
            "transcendental {} in [{}, {}]",
            s.name,
            render_rational(&s.enclosure.lo),
            render_rational(&s.enclosure.hi)
        ));
        match &s.hint {
            None => {}
            Some(RefineHint::Digits(d)) => out.push_str(&format!(" refine digits \"{d}\"")),
            Some(h) => out.push_str(&format!(" refine {h}")),
        }
        out.push_str(";\n");
    }
    match &p.op {
        OperatorKind::OrdinaryDx => out.push_str("operator dx;\n"),
        OperatorKind::Euler => out.push_str("operator euler;\n"),
        OperatorKind::QDifference(q) => out.push_str(&format!("operator qdiff q = {};\n", q.display(table))),
    }
    out.push_str(&format!("equation {};\n", p.equation.display(table)));
    if let Some(s) = &p.segment {
        out.push_str(&format!("segment {};\n", s.display(table)));
    }
    let b = &p.budget;
    let mut items = vec![format!("terms={}", b.max_terms)];
    if let Some(e) = &b.max_exponent {
        items.push(format!("exponent={}", e.display(table)));
    }
    items.push(format!("branches={}", b.max_branches));
    out.push_str(&format!("budget {};\n", items.join(" ")));
    out.push_str(&format!("policy {};\n", p.policy.name()));
    out
}
