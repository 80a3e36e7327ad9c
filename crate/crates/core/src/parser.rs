//! Text syntax for scalars, forms, vector fields, metrics and points.
//!
//! Precedence from loosest to tightest: `+ -`, then `* / /\`, then unary minus, then `^`
//! (right associative). `^` between two forms is the wedge product and between scalars a
//! power with a rational constant exponent. See `docs/grammar.md` for the full grammar.

use crate::error::{Error, Result as CrateResult};
use crate::forms::{DifferentialForm, Metric, VectorField};
use crate::scalar_expr::{Rational, ScalarExpr, VarNames};
use num::{BigInt, One, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    DegreeMixing,
    UnknownVariable,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::DegreeMixing => "degree mixing",
            ParseErrorKind::UnknownVariable => "unknown variable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at {line}:{column} near `{token}`: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

type Result<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    text: String,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            ',' => Some(Tok::Comma),
            ':' => Some(Tok::Colon),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                text: c.to_string(),
                line: start.0,
                column: start.1,
            });
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '/' {
            let (tok, len) = if chars.get(i + 1) == Some(&'\\') {
                (Tok::Wedge, 2)
            } else {
                (Tok::Slash, 1)
            };
            out.push(Token {
                tok,
                text: chars[i..i + len].iter().collect(),
                line: start.0,
                column: start.1,
            });
            advance(len, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let int_part: String = chars[i..j].iter().collect();
            let mut frac_part = String::new();
            if j < chars.len() && chars[j] == '.' {
                j += 1;
                let s = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                frac_part = chars[s..j].iter().collect();
            }
            let mut exponent: i64 = 0;
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                let negative = match chars.get(k) {
                    Some('-') => {
                        k += 1;
                        true
                    }
                    Some('+') => {
                        k += 1;
                        false
                    }
                    _ => false,
                };
                let s = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                if k > s {
                    let digits: String = chars[s..k].iter().collect();
                    let e: i64 = digits.parse().map_err(|_| ParseError {
                        kind: ParseErrorKind::Syntax,
                        line: start.0,
                        column: start.1,
                        token: chars[i..k].iter().collect(),
                        message: "exponent out of range".into(),
                    })?;
                    exponent = if negative { -e } else { e };
                    j = k;
                }
            }
            let text: String = chars[i..j].iter().collect();
            if exponent.abs() > 1000 {
                return Err(ParseError {
                    kind: ParseErrorKind::Syntax,
                    line: start.0,
                    column: start.1,
                    token: text,
                    message: "exponent out of range".into(),
                });
            }
            let digits = format!("{int_part}{frac_part}");
            let mantissa: BigInt = if digits.is_empty() {
                BigInt::zero()
            } else {
                digits.parse().expect("decimal digits")
            };
            let scale = exponent - frac_part.len() as i64;
            let ten = BigInt::from(10);
            let value = if scale >= 0 {
                Rational::from_integer(mantissa * num::pow(ten, scale as usize))
            } else {
                Rational::new(mantissa, num::pow(ten, (-scale) as usize))
            };
            out.push(Token {
                tok: Tok::Num(value),
                text,
                line: start.0,
                column: start.1,
            });
            col += j - i;
            i = j;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let text: String = chars[i..j].iter().collect();
            out.push(Token {
                tok: Tok::Ident(text.clone()),
                text,
                line: start.0,
                column: start.1,
            });
            col += j - i;
            i = j;
            continue;
        }
        return Err(ParseError {
            kind: ParseErrorKind::Syntax,
            line: start.0,
            column: start.1,
            token: c.to_string(),
            message: "unexpected character".into(),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        text: "end of input".into(),
        line,
        column: col,
    });
    Ok(out)
}

#[derive(Debug, Clone)]
enum Value {
    Scalar(ScalarExpr),
    Form(DifferentialForm),
}

/// Index block for variables bound by `int01`, above any coordinate index.
const BOUND_BASE: usize = 1 << 20;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    names: VarNames,
    bound: Vec<String>,
}

impl Parser {
    fn new(text: &str, n: usize) -> Result<Self> {
        if n == 0 || n > VarNames::MAX_DIMENSION {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax,
                line: 1,
                column: 1,
                token: text.chars().take(16).collect(),
                message: format!("dimension must be between 1 and {}", VarNames::MAX_DIMENSION),
            });
        }
        Ok(Self {
            tokens: lex(text)?,
            pos: 0,
            names: VarNames::new(n),
            bound: Vec::new(),
        })
    }

    fn n(&self) -> usize {
        self.names.dimension()
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, at: &Token, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            kind,
            line: at.line,
            column: at.column,
            token: at.text.clone(),
            message: message.into(),
        }
    }

    fn error(&self, kind: ParseErrorKind, message: impl Into<String>) -> ParseError {
        self.error_at(&self.tokens[self.pos], kind, message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token> {
        if *self.peek() == tok {
            Ok(self.next())
        } else {
            Err(self.error(ParseErrorKind::Syntax, format!("expected {what}")))
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(ParseErrorKind::Syntax, "unexpected trailing input"))
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            let negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            let op = self.next();
            let rhs = self.term()?;
            acc = self.combine_sum(acc, rhs, negate, &op)?;
        }
    }

    fn combine_sum(&self, a: Value, b: Value, negate: bool, op: &Token) -> Result<Value> {
        match (a, b) {
            (Value::Scalar(a), Value::Scalar(b)) => Ok(Value::Scalar(if negate { a - b } else { a + b })),
            (Value::Form(a), Value::Form(b)) if a.degree() == b.degree() => {
                Ok(Value::Form(if negate { &a - &b } else { &a + &b }))
            }
            (a, b) => Err(self.error_at(
                op,
                ParseErrorKind::DegreeMixing,
                format!("cannot add terms of degree {} and {}", degree(&a), degree(&b)),
            )),
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star | Tok::Slash | Tok::Wedge => self.next(),
                _ => return Ok(acc),
            };
            let rhs = self.unary()?;
            acc = match (&op.tok, acc, rhs) {
                (Tok::Star, Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a * b),
                (Tok::Star | Tok::Wedge, Value::Scalar(a), Value::Form(b))
                | (Tok::Star | Tok::Wedge, Value::Form(b), Value::Scalar(a)) => Value::Form(b.mul_scalar(&a)),
                (Tok::Star, Value::Form(_), Value::Form(_)) => {
                    return Err(self.error_at(
                        &op,
                        ParseErrorKind::DegreeMixing,
                        "use ^ or /\\ for the product of two forms",
                    ))
                }
                (Tok::Wedge, Value::Form(a), Value::Form(b)) => Value::Form(self.wedge(&a, &b, &op)?),
                (Tok::Wedge, Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a * b),
                (Tok::Slash, Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(self.divide(a, &b, &op)?),
                (Tok::Slash, Value::Form(a), Value::Scalar(b)) => {
                    Value::Form(a.mul_scalar(&self.divide(ScalarExpr::one(), &b, &op)?))
                }
                (Tok::Slash, _, Value::Form(_)) => {
                    return Err(self.error_at(&op, ParseErrorKind::DegreeMixing, "cannot divide by a form"))
                }
                _ => unreachable!("operator set"),
            };
        }
    }

    fn divide(&self, a: ScalarExpr, b: &ScalarExpr, op: &Token) -> Result<ScalarExpr> {
        if b.is_zero() {
            return Err(self.error_at(op, ParseErrorKind::Syntax, "division by zero"));
        }
        Ok(a * b.recip())
    }

    fn wedge(&self, a: &DifferentialForm, b: &DifferentialForm, op: &Token) -> Result<DifferentialForm> {
        a.wedge(b)
            .map_err(|e| self.error_at(op, ParseErrorKind::DegreeMixing, e.to_string()))
    }

    fn unary(&mut self) -> Result<Value> {
        if *self.peek() == Tok::Minus {
            self.next();
            return Ok(match self.unary()? {
                Value::Scalar(s) => Value::Scalar(-s),
                Value::Form(f) => Value::Form(-f),
            });
        }
        if *self.peek() == Tok::Plus {
            self.next();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let op = self.next();
        let exponent = self.unary()?;
        match (base, exponent) {
            (Value::Form(a), Value::Form(b)) => Ok(Value::Form(self.wedge(&a, &b, &op)?)),
            (Value::Scalar(a), Value::Scalar(e)) => match e.as_constant() {
                Some(q) => {
                    if a.is_zero() && q <= Rational::zero() {
                        return Err(self.error_at(&op, ParseErrorKind::Syntax, "zero to a non-positive power"));
                    }
                    Ok(Value::Scalar(a.pow(&q)))
                }
                None => Err(self.error_at(&op, ParseErrorKind::Syntax, "exponent must be a rational constant")),
            },
            _ => Err(self.error_at(
                &op,
                ParseErrorKind::DegreeMixing,
                "^ between a form and a scalar is ambiguous; use * or /\\",
            )),
        }
    }

    fn scalar_arg(&mut self) -> Result<ScalarExpr> {
        let at = self.tokens[self.pos].clone();
        match self.expr()? {
            Value::Scalar(s) => Ok(s),
            Value::Form(_) => Err(self.error_at(&at, ParseErrorKind::DegreeMixing, "expected a scalar argument")),
        }
    }

    fn primary(&mut self) -> Result<Value> {
        let t = self.next();
        match &t.tok {
            Tok::Num(q) => Ok(Value::Scalar(ScalarExpr::constant(q.clone()))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::Ident(name) if *self.peek() == Tok::LParen => {
                self.next();
                let v = match name.as_str() {
                    "exp" => self.scalar_arg()?.exp(),
                    "ln" => {
                        let a = self.scalar_arg()?;
                        if a.is_zero() {
                            return Err(self.error_at(&t, ParseErrorKind::Syntax, "logarithm of zero"));
                        }
                        a.ln()
                    }
                    "int01" => self.integral()?,
                    _ => return Err(self.error_at(&t, ParseErrorKind::Syntax, "unknown function")),
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(Value::Scalar(v))
            }
            Tok::Ident(name) => self.identifier(name, &t),
            _ => Err(self.error_at(&t, ParseErrorKind::Syntax, "expected a number, name or `(`")),
        }
    }

    fn integral(&mut self) -> Result<ScalarExpr> {
        let t = self.next();
        let Tok::Ident(name) = &t.tok else {
            return Err(self.error_at(&t, ParseErrorKind::Syntax, "expected a bound variable name"));
        };
        self.expect(Tok::Comma, "`,`")?;
        self.bound.push(name.clone());
        let body = self.scalar_arg();
        let var = BOUND_BASE + self.bound.len() - 1;
        self.bound.pop();
        Ok(ScalarExpr::integral01(var, &body?))
    }

    fn identifier(&self, name: &str, t: &Token) -> Result<Value> {
        if let Some(depth) = self.bound.iter().rposition(|b| b == name) {
            return Ok(Value::Scalar(ScalarExpr::var(BOUND_BASE + depth)));
        }
        if let Some(i) = self.names.index_of(name) {
            return Ok(Value::Scalar(ScalarExpr::var(i)));
        }
        if let Some(i) = name.strip_prefix('d').and_then(|v| self.names.index_of(v)) {
            return Ok(Value::Form(DifferentialForm::basis(self.n(), i)));
        }
        Err(self.error_at(
            t,
            ParseErrorKind::UnknownVariable,
            format!("`{name}` is not a coordinate or basis form in dimension {}", self.n()),
        ))
    }

    /// `a, b, …` optionally wrapped in one pair of parentheses.
    fn scalar_list(&mut self, open: Tok, close: Tok) -> Result<Vec<ScalarExpr>> {
        let wrapped = *self.peek() == open && self.list_is_wrapped(&open, &close);
        if wrapped {
            self.next();
        }
        let mut out = vec![self.scalar_arg()?];
        while *self.peek() == Tok::Comma {
            self.next();
            out.push(self.scalar_arg()?);
        }
        if wrapped {
            self.expect(close, "closing bracket")?;
        }
        Ok(out)
    }

    /// Does the bracket at the current token close just before the end of input?
    fn list_is_wrapped(&self, open: &Tok, close: &Tok) -> bool {
        let mut depth = 0usize;
        let mut k = 0;
        loop {
            let t = self.peek_at(k);
            if t == open {
                depth += 1;
            } else if t == close {
                depth -= 1;
                if depth == 0 {
                    return *self.peek_at(k + 1) == Tok::Eof;
                }
            } else if *t == Tok::Eof {
                return false;
            }
            k += 1;
        }
    }
}

fn degree(v: &Value) -> usize {
    match v {
        Value::Scalar(_) => 0,
        Value::Form(f) => f.degree(),
    }
}

pub fn parse_scalar(text: &str, n: usize) -> Result<ScalarExpr> {
    let mut p = Parser::new(text, n)?;
    let at = p.tokens[0].clone();
    let v = p.expr()?;
    p.finish()?;
    match v {
        Value::Scalar(s) => Ok(s),
        Value::Form(_) => Err(p.error_at(&at, ParseErrorKind::DegreeMixing, "expected a scalar, found a form")),
    }
}

/// A differential form; scalar input yields a 0-form.
pub fn parse_form(text: &str, n: usize) -> Result<DifferentialForm> {
    let mut p = Parser::new(text, n)?;
    let v = p.expr()?;
    p.finish()?;
    Ok(match v {
        Value::Scalar(s) => DifferentialForm::scalar(n, s),
        Value::Form(f) => f,
    })
}

fn check_count(p: &Parser, found: usize, n: usize, what: &str) -> Result<()> {
    if found != n {
        return Err(p.error_at(
            &p.tokens[0],
            ParseErrorKind::Syntax,
            format!("expected {n} {what}, found {found}"),
        ));
    }
    Ok(())
}

/// `x, -y` or `(x, -y)`.
pub fn parse_vector(text: &str, n: usize) -> Result<VectorField> {
    let mut p = Parser::new(text, n)?;
    let items = p.scalar_list(Tok::LParen, Tok::RParen)?;
    p.finish()?;
    check_count(&p, items.len(), n, "components")?;
    Ok(VectorField::new(items))
}

/// `euclidean`, `diag(a, b, …)` or a nested matrix `[[a, b], [c, d]]`.
pub fn parse_metric(text: &str, n: usize) -> CrateResult<Metric> {
    let mut p = Parser::new(text, n)?;
    match p.peek().clone() {
        Tok::Ident(name) if name.eq_ignore_ascii_case("euclidean") => {
            p.next();
            p.finish()?;
            Ok(Metric::euclidean(n))
        }
        Tok::Ident(name) if name == "diag" => {
            p.next();
            p.expect(Tok::LParen, "`(`")?;
            let mut items = vec![p.scalar_arg()?];
            while *p.peek() == Tok::Comma {
                p.next();
                items.push(p.scalar_arg()?);
            }
            p.expect(Tok::RParen, "`)`")?;
            p.finish()?;
            check_count(&p, items.len(), n, "diagonal entries")?;
            Ok(Metric::diagonal(items))
        }
        Tok::LBracket => {
            p.next();
            let mut rows = Vec::new();
            loop {
                p.expect(Tok::LBracket, "`[`")?;
                let mut row = vec![p.scalar_arg()?];
                while *p.peek() == Tok::Comma {
                    p.next();
                    row.push(p.scalar_arg()?);
                }
                p.expect(Tok::RBracket, "`]`")?;
                check_count(&p, row.len(), n, "entries per row")?;
                rows.push(row);
                if *p.peek() == Tok::Comma {
                    p.next();
                } else {
                    break;
                }
            }
            p.expect(Tok::RBracket, "`]`")?;
            p.finish()?;
            check_count(&p, rows.len(), n, "rows")?;
            Metric::from_matrix(rows)
        }
        _ => Err(Error::Parse(p.error(
            ParseErrorKind::Syntax,
            "expected `euclidean`, `diag(...)` or `[[...], ...]`",
        ))),
    }
}

fn constant(p: &Parser, e: &ScalarExpr) -> Result<Rational> {
    e.as_constant().ok_or_else(|| {
        p.error_at(&p.tokens[0], ParseErrorKind::Syntax, "coordinates must be rational constants")
    })
}

/// Comma-separated rational coordinates, e.g. `0, 1/2`.
pub fn parse_point(text: &str, n: usize) -> Result<Vec<Rational>> {
    let mut p = Parser::new(text, n)?;
    let items = p.scalar_list(Tok::LParen, Tok::RParen)?;
    p.finish()?;
    check_count(&p, items.len(), n, "coordinates")?;
    items.iter().map(|e| constant(&p, e)).collect()
}

/// `lo:hi` per axis, comma separated; a single interval applies to every axis.
pub fn parse_box(text: &str, n: usize) -> Result<Vec<(Rational, Rational)>> {
    let mut p = Parser::new(text, n)?;
    let mut out = Vec::new();
    loop {
        let lo = p.scalar_arg()?;
        p.expect(Tok::Colon, "`:`")?;
        let hi = p.scalar_arg()?;
        out.push((constant(&p, &lo)?, constant(&p, &hi)?));
        if *p.peek() == Tok::Comma {
            p.next();
        } else {
            break;
        }
    }
    p.finish()?;
    if out.len() == 1 {
        return Ok(vec![out[0].clone(); n]);
    }
    check_count(&p, out.len(), n, "intervals")?;
    Ok(out)
}

pub fn print_scalar(e: &ScalarExpr, n: usize) -> String {
    e.to_text(n)
}

/// Text that [`parse_form`] maps back to the same form.
pub fn print_form(a: &DifferentialForm) -> String {
    let n = a.dimension();
    let names = VarNames::new(n);
    if a.degree() == 0 {
        return a.as_scalar().expect("0-form").to_text(n);
    }
    let basis = |key: &[usize]| key.iter().map(|&i| names.basis(i)).collect::<Vec<_>>().join("^");
    if a.is_zero() {
        return if a.degree() <= n {
            format!("0*{}", basis(&(0..a.degree()).collect::<Vec<_>>()))
        } else {
            "0".to_string()
        };
    }
    let mut out = String::new();
    for (k, (key, c)) in a.terms().enumerate() {
        let b = basis(key);
        let (negative, body) = match c.as_constant() {
            Some(q) if q.is_one() => (false, b),
            Some(q) if (-&q).is_one() => (true, b),
            _ if c.term_count() == 1 => {
                let t = c.to_text(n);
                match t.strip_prefix('-') {
                    Some(rest) => (true, format!("{rest}*{b}")),
                    None => (false, format!("{t}*{b}")),
                }
            }
            _ => (false, format!("({})*{b}", c.to_text(n))),
        };
        match (k, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

/// Text accepted by [`parse_metric`].
pub fn print_metric(g: &Metric) -> String {
    let n = g.dimension();
    if g.is_euclidean() {
        return "euclidean".to_string();
    }
    if g.is_diagonal() {
        let d: Vec<String> = (0..n).map(|i| g.entry(i, i).to_text(n)).collect();
        return format!("diag({})", d.join(", "));
    }
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let r: Vec<String> = (0..n).map(|j| g.entry(i, j).to_text(n)).collect();
            format!("[{}]", r.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// `(a, b, …)`.
pub fn print_vector(v: &VectorField) -> String {
    let n = v.dimension();
    let parts: Vec<String> = v.components().iter().map(|c| c.to_text(n)).collect();
    format!("({})", parts.join(", "))
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_form(self))
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_vector(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_expr::rational;

    fn x() -> ScalarExpr {
        ScalarExpr::var(0)
    }
    fn y() -> ScalarExpr {
        ScalarExpr::var(1)
    }

    #[test]
    fn example_forms() {
        let a = parse_form("x*dy - y*dx", 2).unwrap();
        let expected = &DifferentialForm::basis(2, 1).mul_scalar(&x()) - &DifferentialForm::basis(2, 0).mul_scalar(&y());
        assert_eq!(a, expected);
        let b = parse_form("(x + y^2)*dx", 2).unwrap();
        assert_eq!(b, parse_form("x*dx + y^2*dx", 2).unwrap());
        let z = parse_form("dx /\\ dx", 2).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 2);
        assert_eq!(parse_form("dx^dy", 2).unwrap(), parse_form("-dy /\\ dx", 2).unwrap());
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_scalar("-x^2", 1).unwrap(), -x().powi(2));
        assert_eq!(parse_scalar("2^3^2", 1).unwrap(), ScalarExpr::integer(512));
        assert_eq!(parse_scalar("x^-1*y", 2).unwrap(), x().recip() * y());
        assert_eq!(parse_scalar("1 - 2 - 3", 1).unwrap(), ScalarExpr::integer(-4));
        assert_eq!(parse_scalar("12/3/2", 1).unwrap(), ScalarExpr::integer(2));
        assert_eq!(parse_scalar("2*-x", 1).unwrap(), x().scale(&rational(-2, 1)));
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_scalar("0.25", 1).unwrap(), ScalarExpr::ratio(1, 4));
        assert_eq!(parse_scalar("1e-3", 1).unwrap(), ScalarExpr::ratio(1, 1000));
        assert_eq!(parse_scalar("2.5E2", 1).unwrap(), ScalarExpr::integer(250));
        assert_eq!(parse_scalar("3/6", 1).unwrap(), ScalarExpr::ratio(1, 2));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_form("x*dx +\n  w*dy", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable);
        assert_eq!((e.line, e.column), (2, 3));
        assert_eq!(e.token, "w");
        let e = parse_form("x + dx", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::DegreeMixing);
        assert_eq!(e.token, "+");
        let e = parse_scalar("x^y", 2).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        let e = parse_scalar("(x", 2).unwrap_err();
        assert_eq!(e.token, "end of input");
        assert_eq!(parse_scalar("z", 2).unwrap_err().kind, ParseErrorKind::UnknownVariable);
        assert_eq!(parse_scalar("x", 4).unwrap_err().kind, ParseErrorKind::UnknownVariable);
        assert!(parse_scalar("x4", 4).is_ok());
        assert_eq!(parse_form("dx*dy", 2).unwrap_err().kind, ParseErrorKind::DegreeMixing);
        assert_eq!(parse_form("dx^2", 2).unwrap_err().kind, ParseErrorKind::DegreeMixing);
    }

    #[test]
    fn vectors_points_metrics() {
        let v = parse_vector("x, -y", 2).unwrap();
        assert_eq!(v, parse_vector("(x, -y)", 2).unwrap());
        assert_eq!(v.component(1), &-y());
        assert!(parse_vector("(x + 1), y", 2).is_ok());
        assert!(parse_vector("x", 2).is_err());
        assert_eq!(parse_point("0, 1/2", 2).unwrap(), vec![rational(0, 1), rational(1, 2)]);
        assert!(parse_point("x, 0", 2).is_err());
        assert_eq!(parse_box("0:2", 2).unwrap(), vec![(rational(0, 1), rational(2, 1)); 2]);
        assert_eq!(parse_box("-1:1, 0:3", 2).unwrap()[1], (rational(0, 1), rational(3, 1)));
        assert!(parse_metric("euclidean", 2).unwrap().is_euclidean());
        let d = parse_metric("diag(x^2, 1)", 2).unwrap();
        assert_eq!(d.entry(0, 0), &x().powi(2));
        let m = parse_metric("[[2, 1], [1, 3]]", 2).unwrap();
        assert_eq!(m.determinant(), ScalarExpr::integer(5));
        assert!(parse_metric("[[1, x], [y, 1]]", 2).is_err());
        for g in [Metric::euclidean(2), d, m] {
            assert_eq!(parse_metric(&print_metric(&g), 2).unwrap(), g);
        }
    }

    #[test]
    fn printing_round_trips() {
        for (text, n) in [
            ("x*dy - y*dx", 2),
            ("(x + y^2)*dx", 2),
            ("-1/3*x^-1*dx^dz + exp(x*y)*dy^dz", 3),
            ("0*dx^dy", 2),
            ("ln(x3)^2*dx2 + x1^(1/2)*dx4", 4),
            ("int01(t, exp(t*x))*dx", 1),
            ("(x + 1)^-1", 1),
            ("-dx", 1),
        ] {
            let a = parse_form(text, n).unwrap();
            let printed = print_form(&a);
            assert_eq!(parse_form(&printed, n).unwrap(), a, "{text} -> {printed}");
        }
        assert_eq!(print_form(&parse_form("x*dy - y*dx", 2).unwrap()), "-y*dx + x*dy");
    }

    #[test]
    fn nested_integrals_round_trip() {
        let e = parse_scalar("int01(t, x*int01(s, exp(s*t*x)))", 1).unwrap();
        let printed = e.to_text(1);
        assert_eq!(parse_scalar(&printed, 1).unwrap(), e);
        let v = e.evaluate(&[0.5]).unwrap();
        assert!(v.is_finite());
    }
}
