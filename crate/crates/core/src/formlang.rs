//! Text syntax for polynomials, forms, component tables and cocycle data.
//!
//! ```text
//! form       := "diag" "(" [poly {"," poly}] ")" | matrix
//! matrix     := "[" row {"," row} "]"          row := "[" poly {"," poly} "]"
//! poly       := term {("+"|"-") term}           term := factor {"*" factor}
//! factor     := "-" factor | atom ["^" ["-"] int]
//! atom       := int | int "/" int | "t" int | "(" poly ")"
//! components := "{" subset ":" form {"," subset ":" form} "}"
//! subset     := "{" "}" | "{" int {"," int} "}"
//! cocycle    := "cocycle" "(" "m" "=" int "," "r" "=" int "," "e" "=" int ";" body ")"
//! body       := "units" "=" "(" [poly {"," poly}] ")" "," "exps" "=" "[" [ints {"," ints}] "]"
//!             | "target" "=" tuple "," "action" "=" ("trivial" | "inverse")
//!               "," "values" "=" "[" [tuple {"," tuple}] "]"
//! ints       := "[" [int {"," int}] "]"         tuple := "(" [int {"," int}] ")"
//! ```
//!
//! Whitespace is insignificant. Integer literals are reduced into the base
//! field; a denominator divisible by `p` is out of range. Component forms
//! live over the base field, so they may not mention variables.
//!
//! The renderer is the `Display` implementation of each value, and parsing
//! rendered text gives back an equal value.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::basefield::{BaseField, BaseForm, FieldElem, SquareClass};
use crate::cocycles::{make_group, Action, DiagonalCocycle, LoopCocycle, TargetGroup};
use crate::error::{Error, Result};
use crate::laurent::{check_vars, Frac, LaurentPoly};
use crate::loopforms::LoopComponents;
use crate::wittcore::{diagonalize, DiagForm, SymMatrix};

/// Bound on parenthesis and unary-minus nesting.
pub const MAX_DEPTH: usize = 256;
/// Bound on an exponent literal.
pub const MAX_EXPONENT_LITERAL: i64 = 1_000_000;
/// Bound on any exponent of an intermediate monomial.
pub const MAX_DEGREE: i64 = 1_000_000_000;
/// Bound on the number of terms of an intermediate polynomial.
pub const MAX_TERMS: usize = 4096;
/// Bound on numerator and denominator sizes of rational coefficients.
pub const MAX_COEFF_BITS: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String>, found: String },
    OutOfRangeLiteral(String),
    UnknownVariable(String),
    /// An intermediate value exceeded the size limits.
    TooLarge(String),
    DivisionByZero,
}

impl ParseErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            ParseErrorKind::Syntax { .. } => "E_SYNTAX",
            ParseErrorKind::OutOfRangeLiteral(_) => "E_OUT_OF_RANGE_LITERAL",
            ParseErrorKind::UnknownVariable(_) => "E_UNKNOWN_VARIABLE",
            ParseErrorKind::TooLarge(_) => "E_TOO_LARGE",
            ParseErrorKind::DivisionByZero => "E_DIVISION_BY_ZERO",
        }
    }
}

/// A positioned parse failure; `line` and `col` are 1-based, `col` counts
/// characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.col)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                if expected.len() == 1 {
                    write!(f, "expected {}, found {found}", expected[0])
                } else {
                    write!(f, "expected one of {}, found {found}", expected.join(", "))
                }
            }
            ParseErrorKind::OutOfRangeLiteral(s) => write!(f, "literal out of range: {s}"),
            ParseErrorKind::UnknownVariable(s) => write!(f, "unknown variable {s}"),
            ParseErrorKind::TooLarge(s) => write!(f, "expression too large: {s}"),
            ParseErrorKind::DivisionByZero => f.write_str("negative power of zero"),
        }
    }
}

impl std::error::Error for ParseError {}

/// Base field and ambient variable count used to interpret text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseContext {
    pub field: BaseField,
    pub vars: usize,
}

impl ParseContext {
    pub fn new(field: BaseField, vars: usize) -> Result<Self> {
        check_vars(vars)?;
        Ok(ParseContext { field, vars })
    }
}

/// Any value with a text form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Poly(Frac),
    Diag(DiagForm),
    Matrix(SymMatrix),
    Components(LoopComponents),
    Cocycle(LoopCocycle),
    DiagCocycle(DiagonalCocycle),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Poly(x) => x.fmt(f),
            Value::Diag(x) => x.fmt(f),
            Value::Matrix(x) => x.fmt(f),
            Value::Components(x) => x.fmt(f),
            Value::Cocycle(x) => x.fmt(f),
            Value::DiagCocycle(x) => x.fmt(f),
        }
    }
}

pub fn render(v: &Value) -> String {
    v.to_string()
}

/// Parses any value, choosing the syntax by the first token.
pub fn parse_value(text: &str, ctx: &ParseContext) -> Result<Value> {
    let mut p = Parser::new(text, ctx)?;
    let v = match p.peek() {
        Tok::Ident(s) if s == "diag" => p.form()?,
        Tok::LBracket => p.form()?,
        Tok::LBrace => Value::Components(p.components()?),
        Tok::Ident(s) if s == "cocycle" => p.cocycle()?,
        _ => Value::Poly(p.poly()?),
    };
    p.finish()?;
    Ok(v)
}

/// Like [`parse_value`] on raw bytes; invalid UTF-8 is a syntax error.
pub fn parse_bytes(bytes: &[u8], ctx: &ParseContext) -> Result<Value> {
    match std::str::from_utf8(bytes) {
        Ok(s) => parse_value(s, ctx),
        Err(e) => {
            let valid = std::str::from_utf8(&bytes[..e.valid_up_to()]).unwrap_or_default();
            let (line, col) = end_position(valid);
            Err(ParseError {
                kind: ParseErrorKind::Syntax {
                    expected: vec!["UTF-8 text".into()],
                    found: "invalid byte".into(),
                },
                line,
                col,
            }
            .into())
        }
    }
}

pub fn parse_poly(text: &str, ctx: &ParseContext) -> Result<Frac> {
    let mut p = Parser::new(text, ctx)?;
    let v = p.poly()?;
    p.finish()?;
    Ok(v)
}

/// A `diag(...)` list or a matrix.
pub fn parse_form(text: &str, ctx: &ParseContext) -> Result<Value> {
    let mut p = Parser::new(text, ctx)?;
    let v = p.form()?;
    p.finish()?;
    Ok(v)
}

/// A form that must be diagonal: a `diag(...)` list, or a matrix which is
/// then diagonalized.
pub fn parse_diag_form(text: &str, ctx: &ParseContext) -> Result<DiagForm> {
    match parse_form(text, ctx)? {
        Value::Diag(q) => Ok(q),
        Value::Matrix(a) => Ok(diagonalize(&a)?.form),
        _ => unreachable!("parse_form returns forms"),
    }
}

pub fn parse_components(text: &str, ctx: &ParseContext) -> Result<LoopComponents> {
    let mut p = Parser::new(text, ctx)?;
    let v = p.components()?;
    p.finish()?;
    Ok(v)
}

/// Either cocycle syntax.
pub fn parse_cocycle(text: &str, ctx: &ParseContext) -> Result<Value> {
    let mut p = Parser::new(text, ctx)?;
    let v = p.cocycle()?;
    p.finish()?;
    Ok(v)
}

fn end_position(s: &str) -> (usize, usize) {
    let mut line = 1;
    let mut col = 1;
    for c in s.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(BigInt),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Colon,
    Semi,
    Eq,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Var(n) => format!("variable t{n}"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Caret => "^",
            Tok::Slash => "/",
            Tok::Colon => ":",
            Tok::Semi => ";",
            Tok::Eq => "=",
            _ => "",
        }
    }
}

/// Longest integer literal accepted (about 4096 bits).
const MAX_DIGITS: usize = 1234;

fn lex(text: &str) -> std::result::Result<Vec<(Tok, usize, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |kind, line, col| ParseError { kind, line, col };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            if digits.len() > MAX_DIGITS {
                return Err(err(
                    ParseErrorKind::OutOfRangeLiteral(format!("{}-digit integer", digits.len())),
                    l0,
                    c0,
                ));
            }
            Tok::Int(digits.parse().expect("ascii digits"))
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            let rest = &word[1..];
            if word.starts_with('t') && !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                if rest.len() > MAX_DIGITS {
                    return Err(err(ParseErrorKind::UnknownVariable(word), l0, c0));
                }
                Tok::Var(rest.parse().expect("ascii digits"))
            } else {
                Tok::Ident(word)
            }
        } else {
            i += 1;
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                '=' => Tok::Eq,
                _ => {
                    return Err(err(
                        ParseErrorKind::Syntax {
                            expected: vec!["a token".into()],
                            found: format!("character {c:?}"),
                        },
                        l0,
                        c0,
                    ))
                }
            }
        };
        col += i - start;
        out.push((tok, l0, c0));
    }
    out.push((Tok::End, line, col));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    ctx: ParseContext,
    depth: usize,
}

impl Parser {
    fn new(text: &str, ctx: &ParseContext) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            ctx: *ctx,
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, kind: ParseErrorKind) -> Error {
        let (_, line, col) = self.toks[self.pos];
        ParseError { kind, line, col }.into()
    }

    fn error_at(&self, at: usize, kind: ParseErrorKind) -> Error {
        let (_, line, col) = self.toks[at];
        ParseError { kind, line, col }.into()
    }

    fn unexpected(&self, expected: &[&str]) -> Error {
        self.error_here(ParseErrorKind::Syntax {
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&[&format!("`{}`", t.symbol())]))
        }
    }

    fn keyword(&mut self, word: &str) -> Result<()> {
        match self.peek() {
            Tok::Ident(s) if s == word => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&[&format!("`{word}`")])),
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error_here(ParseErrorKind::TooLarge(format!(
                "nesting deeper than {MAX_DEPTH}"
            ))));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    /// A nonnegative integer literal fitting in `u32`.
    fn small_int(&mut self) -> Result<u32> {
        match self.peek().clone() {
            Tok::Int(n) => {
                let v = n.to_u32().ok_or_else(|| {
                    self.error_here(ParseErrorKind::OutOfRangeLiteral(n.to_string()))
                })?;
                self.bump();
                Ok(v)
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    /// Comma-separated items up to `close`, possibly none.
    fn list<T>(&mut self, close: Tok, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        let mut out = Vec::new();
        if *self.peek() == close {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                t if *t == close => {
                    self.bump();
                    return Ok(out);
                }
                _ => return Err(self.unexpected(&["`,`", &format!("`{}`", close.symbol())])),
            }
        }
    }

    fn form(&mut self) -> Result<Value> {
        match self.peek() {
            Tok::Ident(s) if s == "diag" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let entries = self.list(Tok::RParen, |p| p.poly())?;
                Ok(Value::Diag(DiagForm::from_fracs(
                    self.ctx.field,
                    self.ctx.vars,
                    &entries,
                )?))
            }
            Tok::LBracket => {
                self.bump();
                if *self.peek() == Tok::RBracket {
                    return Err(self.unexpected(&["`[`"]));
                }
                let rows = self.list(Tok::RBracket, |p| {
                    p.expect(Tok::LBracket)?;
                    if *p.peek() == Tok::RBracket {
                        return Err(p.unexpected(&["polynomial"]));
                    }
                    p.list(Tok::RBracket, |p| p.poly())
                })?;
                Ok(Value::Matrix(SymMatrix::new(
                    self.ctx.field,
                    self.ctx.vars,
                    rows,
                )?))
            }
            _ => Err(self.unexpected(&["`diag`", "`[`"])),
        }
    }

    fn poly(&mut self) -> Result<Frac> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            let at = self.pos;
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.guard(at, acc.add(&rhs)?)?;
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.guard(at, acc.sub(&rhs)?)?;
                }
                _ => break,
            }
        }
        self.leave();
        Ok(acc)
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            let at = self.pos;
            self.bump();
            let rhs = self.factor()?;
            acc = self.guard(at, acc.mul(&rhs)?)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Frac> {
        if *self.peek() == Tok::Minus {
            self.bump();
            self.enter()?;
            let f = self.factor()?;
            self.leave();
            return Ok(f.neg());
        }
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let at = self.pos;
        self.bump();
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let e = match self.peek().clone() {
            Tok::Int(n) => match n.to_i64().filter(|&e| e <= MAX_EXPONENT_LITERAL) {
                Some(e) => e,
                None => {
                    return Err(self.error_here(ParseErrorKind::OutOfRangeLiteral(format!(
                        "exponent {n} exceeds {MAX_EXPONENT_LITERAL}"
                    ))))
                }
            },
            _ => return Err(self.unexpected(&["integer exponent"])),
        };
        self.bump();
        self.power(at, &base, if negative { -e } else { e })
    }

    fn atom(&mut self) -> Result<Frac> {
        let (field, n) = (self.ctx.field, self.ctx.vars);
        match self.peek().clone() {
            Tok::Int(num) => {
                let at = self.pos;
                self.bump();
                let c = if *self.peek() == Tok::Slash {
                    self.bump();
                    let den = match self.peek().clone() {
                        Tok::Int(d) if !d.is_zero() => d,
                        _ => return Err(self.unexpected(&["positive integer"])),
                    };
                    self.bump();
                    field.from_ratio(&num, &den).ok_or_else(|| {
                        self.error_at(
                            at,
                            ParseErrorKind::OutOfRangeLiteral(format!(
                                "{num}/{den} is not defined in {field}"
                            )),
                        )
                    })?
                } else {
                    field.from_bigint(&num)
                };
                Ok(Frac::from_poly(LaurentPoly::constant(field, n, c)))
            }
            Tok::Var(i) => {
                let idx = i.to_usize().filter(|&i| i >= 1 && i <= n).ok_or_else(|| {
                    self.error_here(ParseErrorKind::UnknownVariable(format!(
                        "t{i} (ambient has {n} variables)"
                    )))
                })?;
                self.bump();
                Ok(Frac::from_poly(LaurentPoly::var(field, n, idx)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.poly()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            _ => Err(self.unexpected(&["integer", "variable", "`(`", "`-`"])),
        }
    }

    fn guard(&self, at: usize, f: Frac) -> Result<Frac> {
        for p in [f.num(), f.den()] {
            if let Some(why) = oversize(p) {
                return Err(self.error_at(at, ParseErrorKind::TooLarge(why)));
            }
        }
        Ok(f)
    }

    fn power(&self, at: usize, base: &Frac, e: i64) -> Result<Frac> {
        if e < 0 && base.is_zero() {
            return Err(self.error_at(at, ParseErrorKind::DivisionByZero));
        }
        let base = if e < 0 { base.inv()? } else { base.clone() };
        let k = e.unsigned_abs();
        let num = self.poly_power(at, base.num(), k)?;
        let den = self.poly_power(at, base.den(), k)?;
        self.guard(at, Frac::new(num, den)?)
    }

    fn poly_power(&self, at: usize, base: &LaurentPoly, k: u64) -> Result<LaurentPoly> {
        let too_large = |why: String| self.error_at(at, ParseErrorKind::TooLarge(why));
        let (_, max_exp, max_bits) = measure(base);
        if (max_exp as u128) * (k as u128) > MAX_DEGREE as u128 {
            return Err(too_large(format!("degree exceeds {MAX_DEGREE}")));
        }
        if (max_bits as u128) * (k as u128) > MAX_COEFF_BITS as u128 {
            return Err(too_large(format!("coefficients exceed {MAX_COEFF_BITS} bits")));
        }
        if base.is_monomial() || base.is_zero() {
            return Ok(base.pow(k as u32));
        }
        // Square and multiply, checking the size after every product.
        let mut result = LaurentPoly::one(base.field(), base.vars());
        let mut sq = base.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                result = result.mul(&sq)?;
                if let Some(why) = oversize(&result) {
                    return Err(too_large(why));
                }
            }
            k >>= 1;
            if k == 0 {
                return Ok(result);
            }
            sq = sq.mul(&sq)?;
            if let Some(why) = oversize(&sq) {
                return Err(too_large(why));
            }
        }
    }

    fn components(&mut self) -> Result<LoopComponents> {
        let (field, n) = (self.ctx.field, self.ctx.vars);
        self.expect(Tok::LBrace)?;
        if *self.peek() == Tok::RBrace {
            return Err(self.unexpected(&["`{`"]));
        }
        let base_ctx = ParseContext { field, vars: 0 };
        let mut out = LoopComponents::empty(field, n)?;
        let mut seen = vec![false; 1 << n];
        let entries = self.list(Tok::RBrace, |p| {
            let at = p.pos;
            let mask = p.subset()?;
            if std::mem::replace(&mut seen[mask as usize], true) {
                return Err(p.error_at(
                    at,
                    ParseErrorKind::Syntax {
                        expected: vec!["a subset not listed before".into()],
                        found: "a repeated subset".into(),
                    },
                ));
            }
            p.expect(Tok::Colon)?;
            let outer = std::mem::replace(&mut p.ctx, base_ctx);
            let form = p.form();
            p.ctx = outer;
            let q = match form? {
                Value::Diag(q) => q,
                Value::Matrix(a) => diagonalize(&a)?.form,
                _ => unreachable!("form returns forms"),
            };
            let classes = q.entries().iter().map(|c| c.base()).collect();
            Ok((mask, BaseForm::new(field, classes)?))
        });
        for (mask, q) in entries? {
            out.set(mask, q)?;
        }
        Ok(out)
    }

    fn subset(&mut self) -> Result<u32> {
        let n = self.ctx.vars;
        self.expect(Tok::LBrace)?;
        let idx = self.list(Tok::RBrace, |p| {
            let at = p.pos;
            let i = p.small_int()?;
            if i == 0 || i as usize > n {
                return Err(p.error_at(
                    at,
                    ParseErrorKind::UnknownVariable(format!("index {i} (ambient has {n} variables)")),
                ));
            }
            Ok(i)
        })?;
        Ok(idx.iter().fold(0u32, |acc, &i| acc | 1 << (i - 1)))
    }

    fn assign(&mut self, name: &str) -> Result<()> {
        self.keyword(name)?;
        self.expect(Tok::Eq)
    }

    fn cocycle(&mut self) -> Result<Value> {
        let field = self.ctx.field;
        self.keyword("cocycle")?;
        self.expect(Tok::LParen)?;
        self.assign("m")?;
        let m = self.small_int()?;
        self.expect(Tok::Comma)?;
        self.assign("r")?;
        let r = self.small_int()?;
        self.expect(Tok::Comma)?;
        self.assign("e")?;
        let e = self.small_int()?;
        self.expect(Tok::Semi)?;
        let value = match self.peek() {
            Tok::Ident(s) if s == "units" => {
                self.assign("units")?;
                self.expect(Tok::LParen)?;
                let base_ctx = ParseContext { field, vars: 0 };
                let outer = std::mem::replace(&mut self.ctx, base_ctx);
                let units = self.list(Tok::RParen, |p| {
                    let f = p.poly()?;
                    let c = f.as_poly().and_then(|p| p.as_constant());
                    match c {
                        Some(c) if !field.is_zero(&c) => field.sq_class(&c),
                        _ => Err(Error::ZeroElement),
                    }
                });
                self.ctx = outer;
                let units: Vec<SquareClass> = units?;
                self.expect(Tok::Comma)?;
                self.assign("exps")?;
                self.expect(Tok::LBracket)?;
                let exps = self.list(Tok::RBracket, |p| {
                    p.expect(Tok::LBracket)?;
                    p.list(Tok::RBracket, |p| p.small_int())
                })?;
                let group = make_group(m, r as usize, e, Some(field))?;
                Value::DiagCocycle(DiagonalCocycle::new(group, field, units, exps)?)
            }
            Tok::Ident(s) if s == "target" => {
                self.assign("target")?;
                self.expect(Tok::LParen)?;
                let moduli = self.list(Tok::RParen, |p| p.small_int())?;
                self.expect(Tok::Comma)?;
                self.assign("action")?;
                let action = match self.peek() {
                    Tok::Ident(s) if s == "trivial" => Action::Trivial,
                    Tok::Ident(s) if s == "inverse" => Action::Inversion,
                    _ => return Err(self.unexpected(&["`trivial`", "`inverse`"])),
                };
                self.bump();
                self.expect(Tok::Comma)?;
                self.assign("values")?;
                self.expect(Tok::LBracket)?;
                let values = self.list(Tok::RBracket, |p| {
                    p.expect(Tok::LParen)?;
                    p.list(Tok::RParen, |p| p.small_int())
                })?;
                let group = make_group(m, r as usize, e, Some(field))?;
                let target = TargetGroup::new(moduli, action)?;
                Value::Cocycle(LoopCocycle::new(group, target, values)?)
            }
            _ => return Err(self.unexpected(&["`units`", "`target`"])),
        };
        self.expect(Tok::RParen)?;
        Ok(value)
    }
}

/// `(terms, max |exponent|, max coefficient bits)`.
fn measure(p: &LaurentPoly) -> (usize, i64, u64) {
    let mut max_exp = 0i64;
    let mut max_bits = 0u64;
    for (m, c) in p.terms() {
        for &e in m.exponents() {
            max_exp = max_exp.max(e.abs());
        }
        if let FieldElem::Rat(r) = c {
            max_bits = max_bits.max(r.numer().bits()).max(r.denom().bits());
        }
    }
    (p.len(), max_exp, max_bits)
}

fn oversize(p: &LaurentPoly) -> Option<String> {
    let (terms, max_exp, max_bits) = measure(p);
    if terms > MAX_TERMS {
        Some(format!("more than {MAX_TERMS} terms"))
    } else if max_exp > MAX_DEGREE {
        Some(format!("degree exceeds {MAX_DEGREE}"))
    } else if max_bits > MAX_COEFF_BITS {
        Some(format!("coefficients exceed {MAX_COEFF_BITS} bits"))
    } else {
        None
    }
}
