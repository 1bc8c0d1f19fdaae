//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' nonneg-int)?
//! base   := rational | identifier | '(' expr ')'
//! rational := int ('/' positive-int)?
//! ```
//!
//! An `int` may carry a leading `-` so that printed forms such as `-3*x`
//! parse back.

use num_bigint::BigInt;

use super::{is_identifier, Chart, Poly, Rational};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].to_string())));
                continue;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &src[start..i];
                debug_assert!(is_identifier(name));
                out.push((start, Tok::Ident(name.to_string())));
                continue;
            }
            _ => {
                let ch = src[i..].chars().next().unwrap();
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn syntax(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.offset(), msg: msg.into() }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc.add_assign_ref(&self.term()?);
                }
                // A `-` directly followed by digits inside a term is a signed
                // int, but between terms it is always subtraction.
                Some(Tok::Minus) => {
                    self.bump();
                    acc.sub_assign_ref(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Some(Tok::Int(digits)) => {
                    let k: u32 = digits
                        .parse()
                        .ok()
                        .filter(|k| *k <= u8::MAX as u32)
                        .ok_or(Error::Syntax { pos: at, msg: "exponent too large".into() })?;
                    return Ok(base.pow(k));
                }
                Some(Tok::Minus) => return Err(Error::NegativeExponent(at)),
                _ => {
                    self.pos -= 1;
                    return Err(self.syntax("expected a nonnegative integer exponent"));
                }
            }
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Poly> {
        let n = self.chart.len();
        match self.bump() {
            Some(Tok::Minus) => match self.peek() {
                Some(Tok::Int(_)) => {
                    let q = self.rational()?;
                    Ok(Poly::constant(-q, n))
                }
                _ => Err(self.syntax("`-` must be followed by an integer literal")),
            },
            Some(Tok::Int(_)) => {
                self.pos -= 1;
                Ok(Poly::constant(self.rational()?, n))
            }
            Some(Tok::Ident(name)) => match self.chart.index_of(&name) {
                Some(i) => Ok(Poly::var(i, n)),
                None => Err(Error::UnknownVariable(name)),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => {
                        self.pos -= 1;
                        Err(self.syntax("expected `)`"))
                    }
                }
            }
            Some(_) => {
                self.pos -= 1;
                Err(self.syntax("expected a number, variable or `(`"))
            }
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let Some(Tok::Int(num)) = self.bump() else {
            unreachable!("caller checked for an integer token");
        };
        if let Some(Tok::Slash) = self.peek() {
            self.bump();
            let at = self.offset();
            match self.bump() {
                Some(Tok::Int(den)) => {
                    let d: BigInt = den.parse().unwrap();
                    if d == BigInt::from(0) {
                        return Err(Error::Syntax { pos: at, msg: "zero denominator".into() });
                    }
                    Ok(format!("{num}/{den}").parse().expect("validated literal"))
                }
                _ => Err(Error::Syntax { pos: at, msg: "expected a positive integer denominator".into() }),
            }
        } else {
            Ok(num.parse().expect("validated literal"))
        }
    }
}

/// Parses `src` into a canonical polynomial over `chart`.
pub fn parse_poly(src: &str, chart: &Chart) -> Result<Poly> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, end: src.len(), chart };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart() -> Chart {
        Chart::new(["x", "y", "p_x"]).unwrap()
    }

    #[test]
    fn grammar_examples() {
        let c = chart();
        assert!(parse_poly("0", &c).unwrap().is_zero());
        assert!(parse_poly("x*y - y*x", &c).unwrap().is_zero());
        assert_eq!(c.print(&parse_poly("(x+1)^2", &c).unwrap()), "x^2 + 2*x + 1");
        assert_eq!(c.print(&parse_poly(" 3/6 * p_x ", &c).unwrap()), "1/2*p_x");
        assert_eq!(c.print(&parse_poly("-2*x - -1", &c).unwrap()), "-2*x + 1");
    }

    #[test]
    fn errors() {
        let c = chart();
        assert_eq!(parse_poly("z + 1", &c).unwrap_err(), Error::UnknownVariable("z".into()));
        assert!(matches!(parse_poly("x^-2", &c).unwrap_err(), Error::NegativeExponent(2)));
        for bad in ["2x", "x y", "", "(x", "x+", "1/0", "1/-2", "x^y", "-x", "x $ y", "x)"] {
            assert!(
                matches!(parse_poly(bad, &c), Err(Error::Syntax { .. })),
                "{bad:?} should be a syntax error"
            );
        }
    }
}
