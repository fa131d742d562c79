//! Text grammar for polynomials and differential operators.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' integer)?
//! primary := integer | x0..x9 | x | y | z | w | d0..d9 | '(' expr ')'
//! ```
//!
//! `x, y, z, w` alias `x0..x3`; `d_i` is `∂/∂x_i`. Products compose left to
//! right and the result is normally ordered. Division is only by nonzero
//! constants. Error offsets are 1-based byte positions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{MultiPoly, Rational};
use crate::weyl::WeylOp;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X(usize),
    D(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn err(offset: usize, message: impl Into<String>) -> Error {
    Error::Parse { offset: offset + 1, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let digit_at = |k: usize| bytes.get(k).filter(|b| b.is_ascii_digit()).map(|b| (b - b'0') as usize);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(text[start..i].parse().expect("digits"))));
                continue;
            }
            b'x' => match digit_at(i + 1) {
                Some(d) => {
                    i += 1;
                    Tok::X(d)
                }
                None => Tok::X(0),
            },
            b'y' => Tok::X(1),
            b'z' => Tok::X(2),
            b'w' => Tok::X(3),
            b'd' => match digit_at(i + 1) {
                Some(d) => {
                    i += 1;
                    Tok::D(d)
                }
                None => return Err(err(start, "expected a variable index after `d`")),
            },
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            _ => {
                let ch = text[start..].chars().next().expect("in bounds");
                return Err(err(start, format!("unexpected character `{ch}`")));
            }
        };
        i += 1;
        // a variable index is a single digit; `x12` is rejected rather than
        // silently read as x1*2
        if matches!(tok, Tok::X(_) | Tok::D(_)) && i < bytes.len() && bytes[i].is_ascii_digit() {
            return Err(err(i, "variable indices are single digits"));
        }
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    n_vars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<WeylOp> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<WeylOp> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?)?;
                }
                Some(Tok::Slash) => {
                    let at = self.offset();
                    self.pos += 1;
                    let rhs = self.unary()?;
                    let c = rhs.as_poly().filter(MultiPoly::is_constant).map(|p| p.coefficient(&vec![0; self.n_vars]));
                    match c {
                        Some(c) if !c.is_zero() => acc = acc.scale(&(Rational::one() / c)),
                        Some(_) => return Err(err(at, "division by zero")),
                        None => return Err(err(at, "division is only by nonzero constants")),
                    }
                }
                Some(Tok::Num(_) | Tok::X(_) | Tok::D(_) | Tok::LParen) => {
                    acc = acc.mul(&self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<WeylOp> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.scale(&-Rational::one()))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<WeylOp> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.peek() {
                Some(Tok::Num(e)) => {
                    let e: u32 = e.try_into().map_err(|_| err(at, "exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(err(at, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<WeylOp> {
        let at = self.offset();
        let n = self.n_vars;
        let tok = self.peek().cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Num(v)) => Ok(WeylOp::constant(n, Rational::from_integer(v))),
            Some(Tok::X(i)) => Ok(WeylOp::x(n, i)),
            Some(Tok::D(i)) => Ok(WeylOp::d(n, i)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(err(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(err(at, "expected a number, variable, `d_i` or `(`")),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

/// Smallest variable count that covers every `x_i` and `d_i` in `text`.
pub fn infer_n_vars(text: &str) -> Result<usize> {
    let toks = lex(text)?;
    Ok(toks
        .iter()
        .filter_map(|(_, t)| match t {
            Tok::X(i) | Tok::D(i) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1))
}

/// Parses an operator in `n_vars` variables (inferred when `None`).
pub fn parse_op(text: &str, n_vars: Option<usize>) -> Result<WeylOp> {
    let toks = lex(text)?;
    let needed = toks
        .iter()
        .filter_map(|(o, t)| match t {
            Tok::X(i) | Tok::D(i) => Some((*o, i + 1)),
            _ => None,
        })
        .max_by_key(|(_, k)| *k);
    let n = match (n_vars, needed) {
        (Some(n), Some((o, k))) if k > n => {
            return Err(err(o, format!("variable index {} out of range for {n} variables", k - 1)));
        }
        (Some(n), _) => n,
        (None, Some((_, k))) => k,
        (None, None) => 1,
    };
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    let mut p = Parser { toks: &toks, pos: 0, end: text.len(), n_vars: n };
    let op = p.expr()?;
    if p.pos < toks.len() {
        return Err(err(p.offset(), "unexpected token"));
    }
    Ok(op)
}

/// Parses a polynomial; operator tokens `d_i` are rejected.
pub fn parse_poly(text: &str, n_vars: Option<usize>) -> Result<MultiPoly> {
    if let Some((o, _)) = lex(text)?.iter().find(|(_, t)| matches!(t, Tok::D(_))) {
        return Err(err(*o, "derivation not allowed in a polynomial"));
    }
    Ok(parse_op(text, n_vars)?.as_poly().expect("no derivations"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{int, rat};

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn polynomial_expressions() {
        let f = parse_poly("x^3 + y^3 + z^3", None).unwrap();
        let expected = &(&x(3, 0).pow(3) + &x(3, 1).pow(3)) + &x(3, 2).pow(3);
        assert_eq!(f, expected);
        assert_eq!(parse_poly("x0*x1 - 3/2", Some(2)).unwrap().to_string(), "x0*x1 - 3/2");
        assert_eq!(parse_poly("2(x+1)^2", None).unwrap().to_string(), "2*x0^2 + 4*x0 + 2");
        assert_eq!(parse_poly("-x^2", None).unwrap(), x(1, 0).pow(2).scale(&int(-1)));
        assert_eq!(parse_poly("x/4", None).unwrap(), x(1, 0).scale(&rat(1, 4)));
        assert_eq!(parse_poly("xy", None).unwrap(), &x(2, 0) * &x(2, 1));
        assert_eq!(parse_poly("7", Some(4)).unwrap(), MultiPoly::constant(4, int(7)));
    }

    #[test]
    fn operator_juxtaposition_composes() {
        assert_eq!(parse_op("d0 x0", None).unwrap().to_string(), "x0*d0 + 1");
        assert_eq!(parse_op("d0^2 x0", None).unwrap().to_string(), "x0*d0^2 + 2*d0");
        assert_eq!(parse_op("(x d0)^2", None).unwrap().to_string(), "x0^2*d0^2 + x0*d0");
        assert_eq!(parse_op("d1 x0", None).unwrap().n_vars(), 2);
    }

    #[test]
    fn error_offsets() {
        let e = |s: &str| match parse_op(s, None) {
            Err(Error::Parse { offset, .. }) => offset,
            other => panic!("expected parse error for {s:?}, got {other:?}"),
        };
        assert_eq!(e("x + $"), 5);
        assert_eq!(e("x +"), 4);
        assert_eq!(e("(x + 1"), 7);
        assert_eq!(e("x / y"), 3);
        assert_eq!(e("x ^ y"), 5);
        assert_eq!(e("x)"), 2);
        assert_eq!(e("x12"), 3);
        assert_eq!(e(""), 1);
        assert_eq!(e("d"), 1);
        assert!(matches!(parse_poly("x d0", None), Err(Error::Parse { offset: 3, .. })));
        assert!(matches!(parse_poly("x3", Some(2)), Err(Error::Parse { offset: 1, .. })));
    }

    #[test]
    fn inference() {
        assert_eq!(infer_n_vars("x^2 + w").unwrap(), 4);
        assert_eq!(infer_n_vars("5").unwrap(), 1);
    }

    #[test]
    fn display_roundtrip() {
        for s in ["x0^3 - 2*x0*x1 + 1/3", "x0^2*d0^2 + x0*d0", "-x1*d0 + 5"] {
            let op = parse_op(s, Some(2)).unwrap();
            assert_eq!(parse_op(&op.to_string(), Some(2)).unwrap(), op);
        }
    }
}
