//! Expression grammar for coefficients given on the command line.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' exponent)?
//! base   := number | 'x' | identifier | '(' expr ')'
//! ```
//!
//! Numbers may be integers, `p/q` via division, or decimals such as `0.25`,
//! which are read exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::expr::{RationalExpr, Q};

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Number(Q),
    X,
    Param(String),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    /// Exponent kept as an expression; it must lower to an integer constant.
    Pow(Box<ExprAst>, Box<ExprAst>),
    Neg(Box<ExprAst>),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Num(decimal(&text, start)?)));
        } else if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(ch) {
            out.push((i, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

fn decimal(text: &str, pos: usize) -> Result<Q> {
    let bad = || Error::Syntax { pos, msg: format!("malformed number `{text}`") };
    let (int, frac) = match text.split_once('.') {
        Some((a, b)) if !b.contains('.') => (a, b),
        None => (text, ""),
        _ => return Err(bad()),
    };
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    Ok(Q::new(num, den))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ExprAst> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = ExprAst::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<ExprAst> {
        if self.eat('-') {
            return Ok(ExprAst::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.eat('^') {
            let exp = if self.eat('-') { ExprAst::Neg(Box::new(self.base()?)) } else { self.base()? };
            return Ok(ExprAst::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<ExprAst> {
        let pos = self.here();
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(v)) => Ok(ExprAst::Number(v)),
            Some(Tok::Ident(name)) if name == "x" => Ok(ExprAst::X),
            Some(Tok::Ident(name)) => Ok(ExprAst::Param(name)),
            Some(Tok::Op('(')) => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Syntax { pos: self.here(), msg: "expected `)`".into() });
                }
                Ok(inner)
            }
            Some(Tok::Op(op)) => Err(Error::Syntax { pos, msg: format!("unexpected `{op}`") }),
            None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
        }
    }
}

impl ExprAst {
    pub fn parse(src: &str) -> Result<ExprAst> {
        let mut p = Parser { toks: lex(src)?, pos: 0, end: src.chars().count() };
        let e = p.expr()?;
        if p.pos < p.toks.len() {
            return Err(Error::Syntax { pos: p.here(), msg: "trailing input".into() });
        }
        Ok(e)
    }

    /// Lowers to an exact rational function after substituting `params`.
    pub fn lower(&self, params: &BTreeMap<String, Q>) -> Result<RationalExpr> {
        Ok(match self {
            ExprAst::Number(v) => RationalExpr::constant(v.clone()),
            ExprAst::X => RationalExpr::x(),
            ExprAst::Param(name) => {
                RationalExpr::constant(params.get(name).cloned().ok_or_else(|| Error::UnknownIdentifier(name.clone()))?)
            }
            ExprAst::Add(a, b) => &a.lower(params)? + &b.lower(params)?,
            ExprAst::Sub(a, b) => &a.lower(params)? - &b.lower(params)?,
            ExprAst::Mul(a, b) => &a.lower(params)? * &b.lower(params)?,
            ExprAst::Div(a, b) => a.lower(params)?.try_div(&b.lower(params)?)?,
            ExprAst::Neg(a) => -a.lower(params)?,
            ExprAst::Pow(a, e) => {
                let k = e.lower(params)?.as_constant().ok_or(Error::NonIntegerExponent)?;
                if !k.is_integer() {
                    return Err(Error::NonIntegerExponent);
                }
                let k: i64 =
                    k.to_integer().try_into().map_err(|_| Error::InvalidArgument("exponent out of range".into()))?;
                let base = a.lower(params)?;
                if k < 0 && base.is_zero() {
                    return Err(Error::ZeroDenominator);
                }
                base.powi(k)?
            }
        })
    }
}

/// Parses `src` and substitutes `params`.
pub fn parse_expression(src: &str, params: &BTreeMap<String, Q>) -> Result<RationalExpr> {
    ExprAst::parse(src)?.lower(params)
}

/// Parses an exact scalar such as `3/2`, `-0.25` or `n+1`.
pub fn parse_scalar(src: &str, params: &BTreeMap<String, Q>) -> Result<Q> {
    parse_expression(src, params)?
        .as_constant()
        .ok_or_else(|| Error::InvalidArgument(format!("`{src}` is not a constant")))
}

/// Reads `name=value` bindings.
pub fn parse_params<S: AsRef<str>>(items: &[S]) -> Result<BTreeMap<String, Q>> {
    let mut out = BTreeMap::new();
    for item in items {
        let item = item.as_ref();
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("parameter `{item}` is not name=value")))?;
        let name = name.trim();
        if name == "x" || name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::InvalidArgument(format!("bad parameter name `{name}`")));
        }
        let v = parse_scalar(value, &out)?;
        out.insert(name.to_string(), v);
    }
    Ok(out)
}
