use std::time::Instant;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use puiseux_core::dsl::HEADER;
use puiseux_core::equation::CloudPoint;
use puiseux_core::exponent::Exponent;
use puiseux_core::polygon::{PolygonElement, Side};
use puiseux_core::scalar::roots::UniPoly;
use puiseux_core::scalar::{Scalar, SymbolTable};
use puiseux_core::solver::{BranchOutcome, BranchResult, Certificate, RankAudit, StepRecord};

/// Everything a command reports. Only `timing` depends on the clock.
pub struct RunReport {
    command: &'static str,
    digest: String,
    started: Instant,
    fields: Map<String, Value>,
    lines: Vec<String>,
    exit_code: u8,
    elapsed_ms: f64,
}

impl RunReport {
    pub fn new(command: &'static str, input: &str) -> Self {
        Self {
            command,
            digest: hex::encode(Sha256::digest(input.as_bytes())),
            started: Instant::now(),
            fields: Map::new(),
            lines: Vec::new(),
            exit_code: 0,
            elapsed_ms: 0.0,
        }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.fields.insert(key.to_string(), v);
    }

    /// A line of the human-readable summary.
    pub fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn lines(&self) -> &[String] {
        &self.lines
    }

    pub fn finish(&mut self, code: u8) {
        self.exit_code = code;
        self.elapsed_ms = self.started.elapsed().as_secs_f64() * 1e3;
    }

    pub fn to_value(&self) -> Value {
        let mut m = self.fields.clone();
        m.insert("command".into(), self.command.into());
        m.insert("input_sha256".into(), self.digest.clone().into());
        m.insert("exit_code".into(), self.exit_code.into());
        m.insert("version".into(), json!({ "puiseux_forge": env!("CARGO_PKG_VERSION"), "format": HEADER }));
        m.insert("timing".into(), json!({ "elapsed_ms": (self.elapsed_ms * 1e3).round() / 1e3 }));
        Value::Object(m)
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("report serializes")
    }
}

pub fn scalar(c: &Scalar, t: &SymbolTable) -> Value {
    c.to_string_with(t).into()
}

pub fn exponent(e: &Exponent, t: &SymbolTable) -> Value {
    json!({ "value": e.to_json(t), "text": e.to_string_with(t) })
}

pub fn opt_exponent(e: Option<&Exponent>, t: &SymbolTable) -> Value {
    e.map_or(Value::Null, |e| exponent(e, t))
}

pub fn poly(p: &UniPoly, t: &SymbolTable, var: &str) -> Value {
    p.display(t, var).to_string().into()
}

pub fn point(p: &CloudPoint, t: &SymbolTable) -> Value {
    json!({ "alpha": exponent(&p.alpha, t), "height": p.height })
}

pub fn side(s: &Side, t: &SymbolTable) -> Value {
    json!({ "coslope": exponent(&s.coslope, t), "top": point(&s.hi, t), "bottom": point(&s.lo, t) })
}

pub fn element(e: &PolygonElement, t: &SymbolTable) -> Value {
    match e {
        PolygonElement::Vertex(v) => json!({ "vertex": point(v, t) }),
        PolygonElement::Side(s) => json!({ "side": side(s, t) }),
    }
}

pub fn step(s: &StepRecord, t: &SymbolTable) -> Value {
    json!({
        "nu": exponent(&s.nu, t),
        "c": scalar(&s.c, t),
        "source": s.source.name(),
        "multiplicity": s.multiplicity.to_json(),
        "phi": poly(&s.phi, t, "C"),
    })
}

pub fn outcome(o: &BranchOutcome, t: &SymbolTable) -> Value {
    let mut v = json!({ "kind": o.name() });
    match o {
        BranchOutcome::Obstruction(ob) => {
            v["reason"] = ob.reason.clone().into();
            v["nu"] = opt_exponent(ob.nu.as_ref(), t);
            v["phi"] = ob.phi.as_ref().map_or(Value::Null, |p| poly(p, t, "C"));
        }
        BranchOutcome::NeedsAlgebraicExtension { nu, factor } => {
            v["nu"] = exponent(nu, t);
            v["factor"] = poly(factor, t, "C");
        }
        BranchOutcome::Undecided(m) => v["reason"] = m.clone().into(),
        BranchOutcome::ExactSolution | BranchOutcome::BudgetReached => {}
    }
    v
}

pub fn audit(a: &RankAudit) -> Value {
    json!({ "rank": a.rank, "bound": a.bound, "ok": a.ok })
}

pub fn certificate(c: &Certificate, t: &SymbolTable) -> Value {
    let orders: Vec<Value> = c.orders().iter().map(|o| opt_exponent(o.as_ref(), t)).collect();
    match c {
        Certificate::RegularSingular { lambda, .. } => {
            json!({ "kind": "regular_singular", "lambda": exponent(lambda, t), "orders": orders })
        }
        Certificate::NotCertified { reason, .. } => json!({ "kind": "not_certified", "reason": reason, "orders": orders }),
    }
}

pub fn branch(b: &BranchResult, a: &RankAudit, t: &SymbolTable) -> Value {
    json!({
        "prefix": b.branch.prefix.to_json(t),
        "prefix_text": b.branch.prefix.to_string_with(t),
        "outcome": outcome(&b.outcome, t),
        "residual_order": opt_exponent(b.residual_order.as_ref(), t),
        "rank_audit": audit(a),
        "steps": b.branch.history.iter().map(|s| step(s, t)).collect::<Vec<_>>(),
    })
}
