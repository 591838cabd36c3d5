//! Infix expression grammar for forms and bivectors in model files.
//!
//! Atoms: `dx` (the covector dθ, or ∂/∂θ in multivector context),
//! `dx/sin(x)` (log covector, forms only), `sin(kx)` / `cos(kx)` with an
//! optional positive integer frequency, and rationals `p/q`. Operators, loosest
//! to tightest: `+`/`-`, `*` (juxtaposition also multiplies), `^` (wedge).
//! A leading `-` negates the first term. No floating-point literals: the whole
//! pipeline is exact.

use logsym_core::symcalc::{LogForm, Multivector, Rat, TrigPoly};
use num_bigint::BigInt;
use num_traits::Zero;

/// Parse error with the position and the token that caused it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    pub line: usize,
    pub col: usize,
    pub token: String,
    pub msg: String,
}

impl std::fmt::Display for ExprError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}: {} (at `{}`)",
            self.line, self.col, self.msg, self.token
        )
    }
}

impl std::error::Error for ExprError {}

/// Parse a differential-form expression over the named coordinates.
pub fn parse_form(src: &str, names: &[String]) -> Result<LogForm, ExprError> {
    match parse(src, names, Target::Form)? {
        Value::Form(f) => Ok(f),
        Value::Scalar(p) => Ok(LogForm::scalar(p)),
        Value::Multi(_) => unreachable!("form target never builds multivectors"),
    }
}

/// Parse a multivector-field expression; `d<name>` reads as ∂/∂name here.
pub fn parse_multivector(src: &str, names: &[String]) -> Result<Multivector, ExprError> {
    match parse(src, names, Target::Multivector)? {
        Value::Multi(m) => Ok(m),
        Value::Scalar(p) => Ok(Multivector::scalar(p)),
        Value::Form(_) => unreachable!("multivector target never builds forms"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Target {
    Form,
    Multivector,
}

enum Value {
    Scalar(TrigPoly),
    Form(LogForm),
    Multi(Multivector),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Int,
    Ident,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    text: String,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Tok>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: char| {
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let ch = chars[i];
        let (tl, tc) = (line, col);
        if ch.is_whitespace() {
            advance(&mut i, &mut line, &mut col, ch);
            continue;
        }
        if ch.is_ascii_digit() {
            let mut text = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                let c = chars[i];
                text.push(c);
                advance(&mut i, &mut line, &mut col, c);
            }
            if i < chars.len() && chars[i] == '.' {
                return Err(ExprError {
                    line: tl,
                    col: tc,
                    token: format!("{text}."),
                    msg: "floating-point literals are not accepted; use rationals p/q".into(),
                });
            }
            toks.push(Tok {
                kind: Kind::Int,
                text,
                line: tl,
                col: tc,
            });
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let mut text = String::new();
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                let c = chars[i];
                text.push(c);
                advance(&mut i, &mut line, &mut col, c);
            }
            toks.push(Tok {
                kind: Kind::Ident,
                text,
                line: tl,
                col: tc,
            });
            continue;
        }
        let kind = match ch {
            '+' => Kind::Plus,
            '-' => Kind::Minus,
            '*' => Kind::Star,
            '^' => Kind::Caret,
            '/' => Kind::Slash,
            '(' => Kind::LParen,
            ')' => Kind::RParen,
            other => {
                return Err(ExprError {
                    line: tl,
                    col: tc,
                    token: other.to_string(),
                    msg: "unexpected character".into(),
                })
            }
        };
        advance(&mut i, &mut line, &mut col, ch);
        toks.push(Tok {
            kind,
            text: ch.to_string(),
            line: tl,
            col: tc,
        });
    }
    Ok(toks)
}

fn parse(src: &str, names: &[String], target: Target) -> Result<Value, ExprError> {
    let toks = lex(src)?;
    let end = toks
        .last()
        .map(|t| (t.line, t.col + t.text.chars().count()))
        .unwrap_or((1, 1));
    let mut p = Parser {
        toks,
        pos: 0,
        names,
        n: names.len(),
        target,
        end,
    };
    let v = p.expression()?;
    if let Some(t) = p.peek() {
        return Err(p.err_at(t.clone(), "unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    names: &'a [String],
    n: usize,
    target: Target,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn peek_kind(&self) -> Option<Kind> {
        self.peek().map(|t| t.kind)
    }

    fn peek2_kind(&self) -> Option<Kind> {
        self.toks.get(self.pos + 1).map(|t| t.kind)
    }

    fn next_tok(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, tok: Tok, msg: impl Into<String>) -> ExprError {
        ExprError {
            line: tok.line,
            col: tok.col,
            token: tok.text,
            msg: msg.into(),
        }
    }

    fn err_eof(&self, msg: impl Into<String>) -> ExprError {
        ExprError {
            line: self.end.0,
            col: self.end.1,
            token: "<end of input>".into(),
            msg: msg.into(),
        }
    }

    fn expect(&mut self, kind: Kind, what: &str) -> Result<Tok, ExprError> {
        match self.next_tok() {
            Some(t) if t.kind == kind => Ok(t),
            Some(t) => Err(self.err_at(t, format!("expected {what}"))),
            None => Err(self.err_eof(format!("expected {what}"))),
        }
    }

    fn coordinate(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|m| m == name)
    }

    fn expression(&mut self) -> Result<Value, ExprError> {
        let negate = if self.peek_kind() == Some(Kind::Minus) {
            self.next_tok();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = neg(acc);
        }
        while let Some(kind) = self.peek_kind() {
            let sub = match kind {
                Kind::Plus => false,
                Kind::Minus => true,
                Kind::Slash => {
                    let t = self.peek().unwrap().clone();
                    return Err(self.err_at(
                        t,
                        "`/` is only available in rationals `p/q` and log poles `d<x>/sin(<x>)`",
                    ));
                }
                _ => break,
            };
            let op = self.next_tok().unwrap();
            let rhs = self.term()?;
            acc = add(acc, rhs, &op, sub)?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.wedge()?;
        loop {
            match self.peek_kind() {
                Some(Kind::Star) => {
                    let op = self.next_tok().unwrap();
                    let rhs = self.wedge()?;
                    acc = mul(acc, rhs, &op)?;
                }
                // juxtaposition multiplies: `sin(x) dy^dx`
                Some(Kind::Int) | Some(Kind::Ident) | Some(Kind::LParen) => {
                    let op = self.peek().unwrap().clone();
                    let rhs = self.wedge()?;
                    acc = mul(acc, rhs, &op)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn wedge(&mut self) -> Result<Value, ExprError> {
        let mut acc = self.primary()?;
        while self.peek_kind() == Some(Kind::Caret) {
            let op = self.next_tok().unwrap();
            let rhs = self.primary()?;
            acc = wedge(acc, rhs, &op)?;
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Value, ExprError> {
        let tok = match self.next_tok() {
            Some(t) => t,
            None => return Err(self.err_eof("expected an expression")),
        };
        match tok.kind {
            Kind::Int => {
                let num: BigInt = tok.text.parse().expect("lexer produced digits");
                if self.peek_kind() == Some(Kind::Slash) && self.peek2_kind() == Some(Kind::Int) {
                    self.next_tok();
                    let den_tok = self.next_tok().unwrap();
                    let den: BigInt = den_tok.text.parse().expect("lexer produced digits");
                    if den.is_zero() {
                        return Err(self.err_at(den_tok, "zero denominator"));
                    }
                    return Ok(Value::Scalar(TrigPoly::constant(
                        self.n,
                        Rat::new(num, den),
                    )));
                }
                Ok(Value::Scalar(TrigPoly::constant(self.n, Rat::from(num))))
            }
            Kind::LParen => {
                let v = self.expression()?;
                self.expect(Kind::RParen, "`)`")?;
                Ok(v)
            }
            Kind::Ident if tok.text == "sin" || tok.text == "cos" => self.trig(&tok),
            Kind::Ident => {
                if let Some(rest) = tok.text.strip_prefix('d') {
                    if let Some(c) = self.coordinate(rest) {
                        return self.differential(&tok, rest, c);
                    }
                }
                if self.coordinate(&tok.text).is_some() {
                    let name = tok.text.clone();
                    return Err(self.err_at(
                        tok,
                        format!("bare coordinate `{name}`; write `d{name}`, `sin({name})`, or `cos({name})`"),
                    ));
                }
                Err(self.err_at(tok, "unknown identifier"))
            }
            _ => Err(self.err_at(tok, "expected an expression")),
        }
    }

    /// `sin(...)` / `cos(...)` with an optional positive frequency: `sin(2x)`.
    fn trig(&mut self, head: &Tok) -> Result<Value, ExprError> {
        self.expect(Kind::LParen, "`(`")?;
        let freq = if self.peek_kind() == Some(Kind::Int) {
            let t = self.next_tok().unwrap();
            match t.text.parse::<i64>() {
                Ok(k) if k >= 1 => k,
                _ => return Err(self.err_at(t, "frequency must be a positive integer")),
            }
        } else if self.peek_kind() == Some(Kind::Minus) {
            let t = self.next_tok().unwrap();
            return Err(self.err_at(t, "frequency must be a positive integer"));
        } else {
            1
        };
        let name_tok = self.expect(Kind::Ident, "a coordinate name")?;
        let c = self
            .coordinate(&name_tok.text)
            .ok_or_else(|| self.err_at(name_tok.clone(), "unknown coordinate"))?;
        self.expect(Kind::RParen, "`)`")?;
        let p = if head.text == "sin" {
            TrigPoly::sin(self.n, c, freq)
        } else {
            TrigPoly::cos(self.n, c, freq)
        };
        Ok(Value::Scalar(p))
    }

    /// `d<name>`, optionally followed by `/sin(<same name>)` in form context.
    fn differential(&mut self, head: &Tok, name: &str, c: usize) -> Result<Value, ExprError> {
        let has_pole = self.peek_kind() == Some(Kind::Slash)
            && self.toks.get(self.pos + 1).is_some_and(|t| t.text == "sin");
        if !has_pole {
            return Ok(match self.target {
                Target::Form => Value::Form(LogForm::covector(self.n, c, false)),
                Target::Multivector => Value::Multi(Multivector::field(self.n, c)),
            });
        }
        let slash = self.next_tok().unwrap();
        if self.target == Target::Multivector {
            return Err(self.err_at(slash, "log poles are not allowed in bivector expressions"));
        }
        self.next_tok(); // `sin`
        self.expect(Kind::LParen, "`(`")?;
        if self.peek_kind() == Some(Kind::Int) {
            let t = self.next_tok().unwrap();
            return Err(self.err_at(t, "log poles use frequency 1: d<x>/sin(<x>)"));
        }
        let name_tok = self.expect(Kind::Ident, "a coordinate name")?;
        if name_tok.text != name {
            let msg = format!("pole coordinate mismatch: d{name}/sin({})", name_tok.text);
            return Err(self.err_at(name_tok, msg));
        }
        self.expect(Kind::RParen, "`)`")?;
        let _ = head;
        Ok(Value::Form(LogForm::covector(self.n, c, true)))
    }
}

fn neg(v: Value) -> Value {
    match v {
        Value::Scalar(p) => Value::Scalar(-&p),
        Value::Form(f) => Value::Form(f.neg()),
        Value::Multi(m) => Value::Multi(m.neg()),
    }
}

fn core_err(op: &Tok, e: logsym_core::Error) -> ExprError {
    ExprError {
        line: op.line,
        col: op.col,
        token: op.text.clone(),
        msg: e.to_string(),
    }
}

fn add(a: Value, b: Value, op: &Tok, sub: bool) -> Result<Value, ExprError> {
    let b = if sub { neg(b) } else { b };
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x + &y)),
        // a zero scalar absorbs into any degree
        (Value::Scalar(x), Value::Form(f)) | (Value::Form(f), Value::Scalar(x)) if x.is_zero() => {
            Ok(Value::Form(f))
        }
        (Value::Scalar(x), Value::Multi(m)) | (Value::Multi(m), Value::Scalar(x))
            if x.is_zero() =>
        {
            Ok(Value::Multi(m))
        }
        (Value::Scalar(x), Value::Form(f)) => LogForm::scalar(x)
            .add(&f)
            .map(Value::Form)
            .map_err(|e| core_err(op, e)),
        (Value::Form(f), Value::Scalar(x)) => f
            .add(&LogForm::scalar(x))
            .map(Value::Form)
            .map_err(|e| core_err(op, e)),
        (Value::Scalar(x), Value::Multi(m)) => Multivector::scalar(x)
            .add(&m)
            .map(Value::Multi)
            .map_err(|e| core_err(op, e)),
        (Value::Multi(m), Value::Scalar(x)) => m
            .add(&Multivector::scalar(x))
            .map(Value::Multi)
            .map_err(|e| core_err(op, e)),
        (Value::Form(f), Value::Form(g)) => f.add(&g).map(Value::Form).map_err(|e| core_err(op, e)),
        (Value::Multi(m), Value::Multi(q)) => {
            m.add(&q).map(Value::Multi).map_err(|e| core_err(op, e))
        }
        _ => Err(ExprError {
            line: op.line,
            col: op.col,
            token: op.text.clone(),
            msg: "cannot mix forms and multivectors".into(),
        }),
    }
}

fn mul(a: Value, b: Value, op: &Tok) -> Result<Value, ExprError> {
    match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(&x * &y)),
        (Value::Scalar(x), Value::Form(f)) | (Value::Form(f), Value::Scalar(x)) => {
            Ok(Value::Form(f.scale(&x)))
        }
        (Value::Scalar(x), Value::Multi(m)) | (Value::Multi(m), Value::Scalar(x)) => {
            Ok(Value::Multi(m.scale(&x)))
        }
        _ => Err(ExprError {
            line: op.line,
            col: op.col,
            token: op.text.clone(),
            msg: "`*` multiplies by scalars only; use `^` for the wedge product".into(),
        }),
    }
}

fn wedge(a: Value, b: Value, op: &Tok) -> Result<Value, ExprError> {
    match (a, b) {
        (Value::Form(f), Value::Form(g)) => {
            f.wedge(&g).map(Value::Form).map_err(|e| core_err(op, e))
        }
        (Value::Multi(m), Value::Multi(q)) => {
            m.wedge(&q).map(Value::Multi).map_err(|e| core_err(op, e))
        }
        // scalars are 0-forms: wedging is scaling
        (a, b) => mul(a, b, op),
    }
}
