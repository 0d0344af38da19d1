//! Parser for scalar literals such as `1/2*z^3 - 2` or `h^2*z`.
//!
//! `z` is the chosen primitive M-th root of unity, `h` the deformation
//! parameter, and `i` (only when 4 divides M) is `z^(M/4)`.

use thiserror::Error;

use super::{Cyclotomic, HScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiteralError {
    #[error("unexpected character {0:?} at offset {1}")]
    UnexpectedChar(char, usize),
    #[error("unexpected end of literal")]
    UnexpectedEnd,
    #[error("trailing input at offset {0}")]
    Trailing(usize),
    #[error("integer out of range at offset {0}")]
    IntegerRange(usize),
    #[error("division by zero or by an h-dependent quantity")]
    BadDivision,
    #[error("negative power of a non-invertible quantity")]
    BadPower,
    #[error("`i` requires a conductor divisible by 4 (got {0})")]
    NoImaginaryUnit(u32),
    #[error("literal depends on h where a plain scalar is required")]
    DependsOnH,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    m: u32,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn int(&mut self) -> Result<i64, LiteralError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.s.get(self.pos) {
                Some(&c) => Err(LiteralError::UnexpectedChar(c as char, self.pos)),
                None => Err(LiteralError::UnexpectedEnd),
            };
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse::<i64>()
            .map_err(|_| LiteralError::IntegerRange(start))
    }

    fn expr(&mut self) -> Result<HScalar, LiteralError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<HScalar, LiteralError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let inv = plain(&d)
                        .and_then(|c| c.inv())
                        .ok_or(LiteralError::BadDivision)?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<HScalar, LiteralError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<HScalar, LiteralError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.int()?;
        if !neg {
            return Ok(base.pow(e as u32));
        }
        let inv = plain(&base)
            .and_then(|c| c.inv())
            .ok_or(LiteralError::BadPower)?;
        Ok(HScalar::constant(inv.pow(e)))
    }

    fn atom(&mut self) -> Result<HScalar, LiteralError> {
        let m = self.m;
        match self.peek() {
            None => Err(LiteralError::UnexpectedEnd),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(v)
                    }
                    Some(c) => Err(LiteralError::UnexpectedChar(c as char, self.pos)),
                    None => Err(LiteralError::UnexpectedEnd),
                }
            }
            Some(b'z') => {
                self.pos += 1;
                Ok(HScalar::constant(Cyclotomic::root_of_unity(m, 1)))
            }
            Some(b'h') => {
                self.pos += 1;
                Ok(HScalar::monomial(Cyclotomic::one(m), 1))
            }
            Some(b'i') => {
                self.pos += 1;
                if !m.is_multiple_of(4) {
                    return Err(LiteralError::NoImaginaryUnit(m));
                }
                Ok(HScalar::constant(Cyclotomic::root_of_unity(m, (m / 4) as i64)))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                Ok(HScalar::constant(Cyclotomic::from_i64(m, v)))
            }
            Some(c) => Err(LiteralError::UnexpectedChar(c as char, self.pos)),
        }
    }
}

fn plain(v: &HScalar) -> Option<Cyclotomic> {
    match v.degree() {
        None => None,
        Some(0) => v.coeff(0).cloned(),
        Some(_) => None,
    }
}

/// Parses a literal that may involve `h`.
pub fn parse_hscalar(s: &str, m: u32) -> Result<HScalar, LiteralError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, m };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(LiteralError::Trailing(p.pos));
    }
    Ok(v)
}

/// Parses an h-free literal into Q(zeta_m).
pub fn parse_cyclotomic(s: &str, m: u32) -> Result<Cyclotomic, LiteralError> {
    let v = parse_hscalar(s, m)?;
    match v.degree() {
        None => Ok(Cyclotomic::zero(m)),
        Some(0) => Ok(v.coeff(0).unwrap().clone()),
        Some(_) => Err(LiteralError::DependsOnH),
    }
}
