//! Recursive-descent parser for polynomial and vector-field expressions.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | IDENT | '(' expr ')'
//! ```
//!
//! Vector fields are sums of terms in which exactly one factor is a
//! derivation token `d/dx`, e.g. `x*d/dx - 2*y^2*d/dy`. Integer literals are
//! reduced modulo `p`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::{Poly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at column {}: {}", self.position + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Deriv(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(s) | Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Deriv(v) => write!(f, "'d/d{v}'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
        }
    }
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(src[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &src[start..i];
                // `d/dx` is a single token
                if word == "d" && bytes.get(i) == Some(&b'/') {
                    let mut j = i + 1;
                    while j < bytes.len() && bytes[j] == b' ' {
                        j += 1;
                    }
                    if bytes.get(j) != Some(&b'd') {
                        return err(j, "expected 'd<variable>' after 'd/'");
                    }
                    let name_start = j + 1;
                    let mut k = name_start;
                    while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                        k += 1;
                    }
                    let name = &src[name_start..k];
                    if name.is_empty() || !name.as_bytes()[0].is_ascii_alphabetic() {
                        return err(name_start, "expected a variable name in 'd/d<variable>'");
                    }
                    out.push((start, Tok::Deriv(name.to_string())));
                    i = k;
                } else {
                    out.push((start, Tok::Ident(word.to_string())));
                }
                continue;
            }
            other => return err(start, format!("unexpected character '{other}'")),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<PolyRing>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

/// One factor of a vector-field term.
enum Factor {
    Poly(Poly),
    Deriv(usize),
}

impl<'a> Parser<'a> {
    fn new(ring: &'a Arc<PolyRing>, src: &str) -> Result<Self, ParseError> {
        Ok(Self {
            ring,
            toks: tokenize(src)?,
            pos: 0,
            end: src.len(),
        })
    }

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

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => err(self.offset(), format!("unexpected {t}")),
        }
    }

    fn literal(&self, digits: &str) -> Poly {
        let f = self.ring.field();
        let v = digits.bytes().fold(0u64, |acc, d| {
            f.add(f.mul(acc, 10 % f.p()), f.from_u64((d - b'0') as u64))
        });
        Poly::monomial(self.ring, super::Monomial::one(self.ring.nvars()), v)
    }

    fn variable(&self, name: &str, at: usize) -> Result<usize, ParseError> {
        self.ring
            .var_index(name)
            .ok_or_else(|| ParseError {
                position: at,
                message: format!("unknown variable '{name}'"),
            })
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn exponent(&mut self) -> Result<Option<u32>, ParseError> {
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.offset();
            return match self.bump() {
                Some(Tok::Int(s)) => s
                    .parse::<u32>()
                    .map(Some)
                    .or_else(|_| err(at, format!("exponent {s} is too large"))),
                Some(t) => err(at, format!("expected an integer exponent, found {t}")),
                None => err(at, "expected an integer exponent"),
            };
        }
        Ok(None)
    }

    fn power(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        Ok(match self.exponent()? {
            Some(e) => base.pow(e as u64),
            None => base,
        })
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let at = self.offset();
        match self.bump() {
            Some(Tok::Int(s)) => Ok(self.literal(&s)),
            Some(Tok::Ident(name)) => Ok(Poly::var(self.ring, self.variable(&name, at)?)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                let close = self.offset();
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => err(close, "expected ')'"),
                }
            }
            Some(Tok::Deriv(_)) => err(at, "derivation token not allowed in a polynomial"),
            Some(t) => err(at, format!("unexpected {t}")),
            None => err(at, "unexpected end of input"),
        }
    }

    fn field_factor(&mut self) -> Result<Factor, ParseError> {
        let at = self.offset();
        if let Some(Tok::Deriv(name)) = self.peek() {
            let name = name.clone();
            self.bump();
            return Ok(Factor::Deriv(self.variable(&name, at + 3)?));
        }
        Ok(Factor::Poly(self.power()?))
    }

    /// Parses `±factor*...*factor` with exactly one derivation token.
    fn field_term(&mut self, coeffs: &mut [Poly], negate: bool) -> Result<(), ParseError> {
        let start = self.offset();
        let mut sign = negate;
        while let Some(Tok::Minus) = self.peek() {
            self.bump();
            sign = !sign;
        }
        let mut coeff = Poly::one(self.ring);
        let mut target = None;
        loop {
            let at = self.offset();
            match self.field_factor()? {
                Factor::Poly(p) => coeff = &coeff * &p,
                Factor::Deriv(i) => {
                    if target.is_some() {
                        return err(at, "a term may contain only one 'd/d<variable>'");
                    }
                    target = Some(i);
                }
            }
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                }
                _ => break,
            }
        }
        let i = match target {
            Some(i) => i,
            None => return err(start, "term has no 'd/d<variable>' factor"),
        };
        if sign {
            coeff = -coeff;
        }
        coeffs[i] = &coeffs[i] + &coeff;
        Ok(())
    }

    fn vector_field(&mut self) -> Result<Vec<Poly>, ParseError> {
        let mut coeffs = vec![Poly::zero(self.ring); self.ring.nvars()];
        self.field_term(&mut coeffs, false)?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    self.field_term(&mut coeffs, false)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    self.field_term(&mut coeffs, true)?;
                }
                _ => break,
            }
        }
        Ok(coeffs)
    }
}

/// Parses a polynomial over `ring`.
pub fn parse_poly(ring: &Arc<PolyRing>, src: &str) -> Result<Poly, ParseError> {
    let mut p = Parser::new(ring, src)?;
    if p.peek().is_none() {
        return err(0, "empty expression");
    }
    let out = p.expr()?;
    p.expect_end()?;
    Ok(out)
}

/// Parses `f1*d/dx1 + ... + fn*d/dxn` into the coefficient of each ring variable.
pub fn parse_vector_field(ring: &Arc<PolyRing>, src: &str) -> Result<Vec<Poly>, ParseError> {
    let mut p = Parser::new(ring, src)?;
    if p.peek().is_none() {
        return err(0, "empty expression");
    }
    let out = p.vector_field()?;
    p.expect_end()?;
    Ok(out)
}

/// Variable names mentioned in an expression, including those in `d/dx` tokens,
/// in sorted order.
pub fn identifiers(src: &str) -> Result<Vec<String>, ParseError> {
    let mut names = BTreeSet::new();
    for (_, t) in tokenize(src)? {
        match t {
            Tok::Ident(n) | Tok::Deriv(n) => {
                names.insert(n);
            }
            _ => {}
        }
    }
    Ok(names.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(7, &["x", "y", "z"]).unwrap()
    }

    #[test]
    fn precedence_and_unary_minus() {
        let r = ring();
        let a = parse_poly(&r, "-x^2*y + 3*(x - 1)^2").unwrap();
        let b = parse_poly(&r, "3*x^2 - 6*x + 3 - x^2*y").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_poly(&r, "--x").unwrap(), Poly::var(&r, 0));
    }

    #[test]
    fn literals_reduce_mod_p() {
        let r = ring();
        assert!(parse_poly(&r, "14*x").unwrap().is_zero());
        assert_eq!(
            parse_poly(&r, "123456789012345678901234567890").unwrap(),
            Poly::constant(&r, (123456789012345678901234567890u128 % 7) as i64)
        );
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring();
        let e = parse_poly(&r, "x + w").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_poly(&r, "(x + y").unwrap_err();
        assert_eq!(e.position, 6);
        assert!(parse_poly(&r, "x ^ y").is_err());
        assert!(parse_poly(&r, "x $ y").is_err());
        assert!(parse_poly(&r, "").is_err());
        assert!(parse_poly(&r, "x y").is_err());
    }

    #[test]
    fn vector_fields() {
        let r = ring();
        let c = parse_vector_field(&r, "x*d/dx - y^2*d/dy + d/dx").unwrap();
        assert_eq!(c[0], parse_poly(&r, "x + 1").unwrap());
        assert_eq!(c[1], parse_poly(&r, "-y^2").unwrap());
        assert!(c[2].is_zero());
        let c = parse_vector_field(&r, "-d/dz*(x+y)").unwrap();
        assert_eq!(c[2], parse_poly(&r, "-x-y").unwrap());
        assert!(parse_vector_field(&r, "x*y").is_err());
        assert!(parse_vector_field(&r, "d/dx*d/dy").is_err());
        assert!(parse_vector_field(&r, "d/dw").is_err());
        assert!(parse_vector_field(&r, "d/x").is_err());
    }

    #[test]
    fn identifier_collection() {
        assert_eq!(
            identifiers("x1*d/dz + y^2").unwrap(),
            vec!["x1".to_string(), "y".into(), "z".into()]
        );
    }
}
