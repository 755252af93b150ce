//! Recursive-descent parser for the textual entry grammar:
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' uint)?
//! atom   := uint | ident | '(' expr ')'
//! ```
//!
//! Identifiers are declared parameter symbols; `x` is accepted only where a
//! polynomial in `x` is expected. `uint/uint` falls out of term-level
//! division. Division by anything of positive degree in `x` is rejected.

use super::{ParamContext, Scalar};
use crate::polymat::XPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(offset: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        offset,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &input[start..i];
                let n: BigInt = digits.parse().expect("digits");
                toks.push((start, Tok::Int(n)));
            }
            _ if b.is_ascii_alphabetic() || b == b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(input[start..i].to_string())));
            }
            _ => return err(i, format!("unexpected character `{}`", b as char)),
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ctx: &'a ParamContext,
    allow_x: bool,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<XPoly, ParseError> {
        let negated = self.eat(&Tok::Minus);
        let mut v = self.term()?;
        if negated {
            v = v.neg();
        }
        loop {
            if self.eat(&Tok::Plus) {
                v = v.add(&self.term()?);
            } else if self.eat(&Tok::Minus) {
                v = v.sub(&self.term()?);
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<XPoly, ParseError> {
        let mut v = self.factor()?;
        loop {
            if self.eat(&Tok::Star) {
                v = v.mul(&self.factor()?);
            } else if self.eat(&Tok::Slash) {
                let at = self.offset();
                let d = self.factor()?;
                let s = match d.as_scalar() {
                    Some(s) => s,
                    None => return err(at, "cannot divide by a polynomial in x"),
                };
                if s.is_zero() {
                    return err(at, "division by zero");
                }
                let inv = s.inv().expect("nonzero");
                v = v.scale(&inv);
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<XPoly, ParseError> {
        let a = self.atom()?;
        if self.eat(&Tok::Caret) {
            let at = self.offset();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e = u32::try_from(&n)
                        .ok()
                        .filter(|&e| e <= 512)
                        .ok_or_else(|| ParseError {
                            offset: at,
                            message: "exponent out of range".to_string(),
                        })?;
                    Ok(a.pow(e))
                }
                _ => err(at, "expected integer exponent after `^`"),
            }
        } else {
            Ok(a)
        }
    }

    fn atom(&mut self) -> Result<XPoly, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(XPoly::constant(Scalar::from_rational(
                BigRational::from_integer(n),
            ))),
            Some(Tok::Ident(name)) => {
                if name == "x" {
                    if self.allow_x {
                        Ok(XPoly::x())
                    } else {
                        err(at, "`x` is not allowed in a scalar expression")
                    }
                } else {
                    match self.ctx.scalar(&name) {
                        Some(s) => Ok(XPoly::constant(s)),
                        None => err(at, format!("undeclared symbol `{name}`")),
                    }
                }
            }
            Some(Tok::LParen) => {
                let v = self.expr()?;
                if self.eat(&Tok::RParen) {
                    Ok(v)
                } else {
                    err(self.offset(), "expected `)`")
                }
            }
            Some(_) => err(at, "expected a number, symbol, or `(`"),
            None => err(at, "unexpected end of input"),
        }
    }
}

fn parse(input: &str, ctx: &ParamContext, allow_x: bool) -> Result<XPoly, ParseError> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: input.len(),
        ctx,
        allow_x,
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return err(p.offset(), "trailing input");
    }
    Ok(v)
}

/// Parses a scalar expression (no `x`).
pub fn parse_scalar(input: &str, ctx: &ParamContext) -> Result<Scalar, ParseError> {
    let v = parse(input, ctx, false)?;
    Ok(v.as_scalar().expect("degree zero by construction"))
}

/// Parses a polynomial in `x` with scalar coefficients.
pub fn parse_xpoly(input: &str, ctx: &ParamContext) -> Result<XPoly, ParseError> {
    parse(input, ctx, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> ParamContext {
        ParamContext::new(&["a", "b", "E"]).unwrap()
    }

    #[test]
    fn scalars_parse_and_reduce() {
        let c = ctx();
        assert_eq!(parse_scalar("3/4", &c).unwrap(), Scalar::ratio(3, 4));
        let v = parse_scalar("(a^2 - b^2)/(a - b)", &c).unwrap();
        let expect = Scalar::var(0) + Scalar::var(1);
        assert_eq!(v, expect);
        assert_eq!(parse_scalar("2*E + a^2", &c).unwrap(), {
            Scalar::var(2).mul_nat(2) + Scalar::var(0).pow(2)
        });
    }

    #[test]
    fn x_only_in_polynomials() {
        let c = ctx();
        assert!(parse_scalar("x + 1", &c).is_err());
        let p = parse_xpoly("-2*x + 2*b", &c).unwrap();
        assert_eq!(p.coeff(1), Scalar::from_int(-2));
        assert_eq!(p.coeff(0), Scalar::var(1).mul_nat(2));
    }

    #[test]
    fn errors_carry_offsets() {
        let c = ctx();
        let e = parse_xpoly("x^", &c).unwrap_err();
        assert_eq!(e.offset, 2);
        let e = parse_xpoly("a + q", &c).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(e.message.contains("undeclared symbol"));
        assert!(parse_xpoly("1/x", &c).is_err());
    }

    #[test]
    fn render_round_trips() {
        let c = ctx();
        for src in [
            "x^2 - 1/2",
            "(2*E + a^2)*x^3 + a*b*x - 7/3",
            "-2*a*b*x + 2*a",
            "(a*b)/(2*E + a^2)",
        ] {
            let p = parse_xpoly(src, &c).unwrap();
            let rendered = p.render(&c);
            let again = parse_xpoly(&rendered, &c).unwrap();
            assert_eq!(p, again, "render of `{src}` was `{rendered}`");
        }
    }
}
