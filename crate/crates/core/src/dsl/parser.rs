use super::lexer::{Tok, Token};
use super::{ParseError, Pos};

#[derive(Clone, Debug, PartialEq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(String),
    Ident(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

/// `[k *] (pi | e) [/ d]` or `digits "..."`.
#[derive(Clone, Debug, PartialEq)]
pub enum HintAst {
    Multiple { constant: String, num: String, den: String },
    Digits(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum OperatorAst {
    Dx,
    Euler,
    QDiff(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    Transcendental { name: String, lo: (bool, String, Option<String>), hi: (bool, String, Option<String>), hint: Option<HintAst> },
    Operator(OperatorAst),
    Equation(Expr),
    Segment(Expr),
    Budget(Vec<(String, Expr, Pos)>),
    Policy(String),
    Precision(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub pos: Pos,
}

pub const HEADER: &str = "puiseux-forge v1";

const STATEMENTS: [&str; 7] = ["transcendental", "operator", "equation", "segment", "budget", "policy", "precision"];

pub struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Self { toks, at: 0 }
    }

    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str], msg: &str) -> Result<T, ParseError> {
        let t = self.peek();
        let message = if msg.is_empty() { format!("unexpected {}", t.tok.describe()) } else { msg.to_string() };
        Err(ParseError::new(t.pos, expected.iter().map(|s| s.to_string()).collect(), &message))
    }

    fn eat_punct(&mut self, c: char) -> Result<Pos, ParseError> {
        if self.peek().tok == Tok::Punct(c) {
            Ok(self.next().pos)
        } else {
            self.err(&[&format!("`{c}`")], "")
        }
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == s)
    }

    fn eat_keyword(&mut self, s: &str) -> Result<Pos, ParseError> {
        if self.is_ident(s) {
            Ok(self.next().pos)
        } else {
            self.err(&[&format!("`{s}`")], "")
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.next().pos))
            }
            _ => self.err(&[what], ""),
        }
    }

    fn number(&mut self) -> Result<String, ParseError> {
        match &self.peek().tok {
            Tok::Number(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            _ => self.err(&["number"], ""),
        }
    }

    pub fn program(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.header()?;
        let mut out = Vec::new();
        while self.peek().tok != Tok::Eof {
            out.push(self.statement()?);
        }
        Ok(out)
    }

    pub fn end(&mut self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            self.err(&["end of input"], "")
        }
    }

    fn header(&mut self) -> Result<(), ParseError> {
        let want = [Tok::Ident("puiseux".into()), Tok::Punct('-'), Tok::Ident("forge".into()), Tok::Ident("v1".into())];
        for w in want {
            if self.peek().tok != w {
                return self.err(&[&format!("`{HEADER}`")], &format!("files must start with `{HEADER}`"));
            }
            self.next();
        }
        Ok(())
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let (kw, pos) = match &self.peek().tok {
            Tok::Ident(s) if STATEMENTS.contains(&s.as_str()) => {
                let s = s.clone();
                (s, self.next().pos)
            }
            _ => return self.err(&STATEMENTS, ""),
        };
        let kind = match kw.as_str() {
            "transcendental" => self.transcendental()?,
            "operator" => self.operator()?,
            "equation" => StmtKind::Equation(self.expr()?),
            "segment" => StmtKind::Segment(self.expr()?),
            "budget" => self.budget()?,
            "policy" => StmtKind::Policy(self.ident("policy name")?.0),
            "precision" => StmtKind::Precision(self.number()?),
            _ => unreachable!(),
        };
        self.eat_punct(';')?;
        Ok(Stmt { kind, pos })
    }

    /// `[-] digits [/ digits]`
    fn rational_literal(&mut self) -> Result<(bool, String, Option<String>), ParseError> {
        let neg = if self.is_punct('-') {
            self.next();
            true
        } else {
            false
        };
        let n = self.number()?;
        let d = if self.is_punct('/') {
            self.next();
            Some(self.number()?)
        } else {
            None
        };
        Ok((neg, n, d))
    }

    fn transcendental(&mut self) -> Result<StmtKind, ParseError> {
        let (name, _) = self.ident("symbol name")?;
        self.eat_keyword("in")?;
        self.eat_punct('[')?;
        let lo = self.rational_literal()?;
        self.eat_punct(',')?;
        let hi = self.rational_literal()?;
        self.eat_punct(']')?;
        let hint = if self.is_ident("refine") {
            self.next();
            Some(self.hint()?)
        } else {
            None
        };
        Ok(StmtKind::Transcendental { name, lo, hi, hint })
    }

    fn hint(&mut self) -> Result<HintAst, ParseError> {
        if self.is_ident("digits") {
            self.next();
            return match &self.peek().tok {
                Tok::Str(s) => {
                    let s = s.clone();
                    self.next();
                    Ok(HintAst::Digits(s))
                }
                _ => self.err(&["string"], ""),
            };
        }
        let num = if matches!(self.peek().tok, Tok::Number(_)) {
            let n = self.number()?;
            self.eat_punct('*')?;
            n
        } else {
            "1".into()
        };
        let constant = if self.is_ident("pi") || self.is_ident("e") {
            self.ident("`pi` or `e`")?.0
        } else {
            return self.err(&["`pi`", "`e`", "`digits`"], "");
        };
        let den = if self.is_punct('/') {
            self.next();
            self.number()?
        } else {
            "1".into()
        };
        Ok(HintAst::Multiple { constant, num, den })
    }

    fn operator(&mut self) -> Result<StmtKind, ParseError> {
        let (name, _) = self.ident("`dx`, `euler` or `qdiff`")?;
        Ok(StmtKind::Operator(match name.as_str() {
            "dx" => OperatorAst::Dx,
            "euler" => OperatorAst::Euler,
            "qdiff" => {
                self.eat_keyword("q")?;
                self.eat_punct('=')?;
                OperatorAst::QDiff(self.expr()?)
            }
            _ => {
                self.at -= 1;
                return self.err(&["`dx`", "`euler`", "`qdiff`"], "");
            }
        }))
    }

    fn budget(&mut self) -> Result<StmtKind, ParseError> {
        let mut items = Vec::new();
        loop {
            let (key, pos) = match &self.peek().tok {
                Tok::Ident(k) if ["terms", "exponent", "branches"].contains(&k.as_str()) => {
                    let k = k.clone();
                    (k, self.next().pos)
                }
                _ if !items.is_empty() => break,
                _ => return self.err(&["`terms`", "`exponent`", "`branches`"], ""),
            };
            self.eat_punct('=')?;
            items.push((key, self.expr()?, pos));
        }
        Ok(StmtKind::Budget(items))
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.is_punct('+') {
                BinOp::Add
            } else if self.is_punct('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let pos = self.next().pos;
            let rhs = self.term()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.is_punct('*') {
                BinOp::Mul
            } else if self.is_punct('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let pos = self.next().pos;
            let rhs = self.unary()?;
            lhs = Expr { kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_punct('-') {
            let pos = self.next().pos;
            let e = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(e)), pos });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.is_punct('^') {
            let pos = self.next().pos;
            // right-associative; a leading minus binds to the exponent
            let exp = self.unary()?;
            return Ok(Expr { kind: ExprKind::Pow(Box::new(base), Box::new(exp)), pos });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Number(s) => {
                self.next();
                Ok(Expr { kind: ExprKind::Num(s), pos: t.pos })
            }
            Tok::Ident(s) if !STATEMENTS.contains(&s.as_str()) => {
                self.next();
                Ok(Expr { kind: ExprKind::Ident(s), pos: t.pos })
            }
            Tok::Bracketed(s) => {
                self.next();
                Ok(Expr { kind: ExprKind::Ident(s), pos: t.pos })
            }
            Tok::Punct('(') => {
                self.next();
                let e = self.expr()?;
                self.eat_punct(')')?;
                Ok(e)
            }
            _ => self.err(&["number", "identifier", "`(`"], ""),
        }
    }
}
