//! Parser for the printed form of polynomials and rational functions:
//! integers, variables u1..um, + - * / ^ and parentheses, evaluated with
//! field arithmetic so that any printed value round-trips.

use super::{Poly, Rat, RatFunc};
use num::bigint::BigInt;
use num::One;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b = s.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = s[start..i].parse().expect("digit run");
                toks.push((start, Tok::Int(n)));
            }
            'u' => {
                let start = i;
                i += 1;
                let ds = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(ParseError { pos: start, msg: "expected digits after 'u'".into() });
                }
                let k: usize = s[ds..i]
                    .parse()
                    .map_err(|_| ParseError { pos: ds, msg: "variable index too large".into() })?;
                if k == 0 {
                    return Err(ParseError { pos: start, msg: "variables start at u1".into() });
                }
                toks.push((start, Tok::Var(k - 1)));
            }
            _ => {
                return Err(ParseError { pos: i, msg: format!("unexpected character '{}'", c) });
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    nvars: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError { pos: self.here(), msg: msg.into() })
    }

    fn expr(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = acc
                        .div(&rhs)
                        .map_err(|e| ParseError { pos: self.here(), msg: e.to_string() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFunc, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(self.factor()?.neg());
        }
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let neg = if let Some(Tok::Minus) = self.peek() {
                self.bump();
                true
            } else {
                false
            };
            let e = match self.bump() {
                Some(Tok::Int(n)) => n,
                _ => return self.err("expected integer exponent"),
            };
            let e: i64 = match e.try_into() {
                Ok(v) => v,
                Err(_) => return self.err("exponent out of range"),
            };
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|er| ParseError { pos: self.here(), msg: er.to_string() });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RatFunc, ParseError> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(RatFunc::from_rat(self.nvars, Rat::from(n))),
            Some(Tok::Var(i)) => {
                if i >= self.nvars {
                    return self.err(&format!(
                        "variable u{} exceeds torus rank {}",
                        i + 1,
                        self.nvars
                    ));
                }
                Ok(RatFunc::from_poly(Poly::var(self.nvars, i)))
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => self.err("expected ')'"),
                }
            }
            _ => self.err("expected a number, variable, or '('"),
        }
    }
}

/// Parse an expression in u1..u{nvars} into a rational function.
pub fn parse_ratfunc(s: &str, nvars: usize) -> Result<RatFunc, ParseError> {
    let toks = lex(s)?;
    let mut p = Parser { toks: &toks, pos: 0, nvars, end: s.len() };
    let r = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Parse a variable-free expression like "3", "-5/7" into a rational.
pub fn parse_rat(s: &str) -> Result<Rat, ParseError> {
    let rf = parse_ratfunc(s, 0)?;
    debug_assert!(rf.den.as_constant().map_or(false, |c| c.is_one()));
    match rf.num.as_constant() {
        Some(c) => Ok(c),
        None => Err(ParseError { pos: 0, msg: "expected a constant".into() }),
    }
}
