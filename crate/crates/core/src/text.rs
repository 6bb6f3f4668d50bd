//! Text form of polynomials.
//!
//! Grammar: terms joined by `+`/`-`; a term is an optional rational
//! coefficient (`a/b` or an integer) followed by `*`-separated powers `xk^e`
//! (`^e` omitted when `e = 1`). Whitespace is insignificant. A coefficient may
//! precede the first power with or without `*`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::degree::fmt_rational;
use crate::error::{Error, Result};
use crate::poly::{Coeff, Monomial, Polynomial, MAX_VARS};

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let powers = monomial_text(m);
            if powers.is_empty() {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{powers}")?;
            } else {
                write!(f, "{}*{powers}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

fn monomial_text(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{e}", i + 1)),
        }
    }
    parts.join("*")
}

struct Lexer<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    src: &'a str,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        let chars = src.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
        Lexer { chars, pos: 0, line, src }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|(_, c)| *c)
    }

    fn column(&self) -> usize {
        self.chars.get(self.pos).map(|(i, _)| i + 1).unwrap_or(self.src.chars().count() + 1)
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { line: self.line, column: self.column(), message: message.into() }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        self.pos += 1;
        c
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        let mut digits = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_digit()) {
            digits.push(c);
            self.pos += 1;
        }
        if digits.is_empty() {
            self.pos = start;
            return Err(self.err("expected digits"));
        }
        Ok(digits.parse().expect("ascii digits"))
    }

    fn small(&mut self, what: &str) -> Result<usize> {
        let v = self.integer()?;
        v.try_into().map_err(|_| self.err(format!("{what} out of range")))
    }
}

/// Parse a polynomial in `n` variables; `line` is used in error positions.
pub fn parse_polynomial_at(src: &str, n: usize, line: usize) -> Result<Polynomial> {
    assert!(n <= MAX_VARS);
    let mut lx = Lexer::new(src, line);
    if lx.peek().is_none() {
        return Err(lx.err("empty polynomial"));
    }
    let mut out = Polynomial::zero(n);
    let mut first = true;
    loop {
        let mut sign = Coeff::one();
        match lx.peek() {
            Some('+') => {
                lx.bump();
            }
            Some('-') => {
                lx.bump();
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return Err(lx.err(format!("unexpected '{c}'"))),
            None => break,
        }
        first = false;
        let (c, m) = parse_term(&mut lx, n)?;
        out.add_term(m, sign * c);
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(out)
}

pub fn parse_polynomial(src: &str, n: usize) -> Result<Polynomial> {
    parse_polynomial_at(src, n, 1)
}

fn parse_term(lx: &mut Lexer<'_>, n: usize) -> Result<(Coeff, Monomial)> {
    let mut coeff = Coeff::one();
    let mut exps = vec![0u16; n];
    let mut saw_factor = false;
    if lx.peek().is_some_and(|c| c.is_ascii_digit()) {
        let num = lx.integer()?;
        let mut c = Coeff::from_integer(num);
        if lx.peek() == Some('/') {
            lx.bump();
            let den = lx.integer()?;
            if den.is_zero() {
                return Err(lx.err("zero denominator"));
            }
            c = Coeff::new(c.numer().clone(), den);
        }
        coeff = c;
        saw_factor = true;
        if lx.peek() == Some('*') {
            lx.bump();
            if lx.peek() != Some('x') {
                return Err(lx.err("expected a variable after '*'"));
            }
        }
    }
    while lx.peek() == Some('x') {
        lx.bump();
        let col = lx.column();
        let k = lx.small("variable index")?;
        if k == 0 || k > n {
            return Err(Error::Parse { line: lx.line, column: col, message: format!("variable x{k} outside x1..x{n}") });
        }
        let mut e = 1u16;
        if lx.peek() == Some('^') {
            lx.bump();
            let v = lx.small("exponent")?;
            e = u16::try_from(v).map_err(|_| lx.err("exponent out of range"))?;
        }
        exps[k - 1] = exps[k - 1].checked_add(e).ok_or_else(|| lx.err("exponent out of range"))?;
        saw_factor = true;
        if lx.peek() == Some('*') {
            lx.bump();
            if lx.peek() != Some('x') {
                return Err(lx.err("expected a variable after '*'"));
            }
        }
    }
    if !saw_factor {
        return Err(match lx.peek() {
            Some(c) => lx.err(format!("unexpected '{c}'")),
            None => lx.err("expected a term"),
        });
    }
    Ok((coeff, Monomial::new(&exps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let p = parse_polynomial("x1 - 2*x1*x2*x3 - 2 x2^3 + 1/2", 3).unwrap();
        let s = p.to_string();
        assert_eq!(s, "-2*x1*x2*x3 - 2*x2^3 + x1 + 1/2");
        assert_eq!(parse_polynomial(&s, 3).unwrap(), p);
        assert_eq!(parse_polynomial("0", 3).unwrap().to_string(), "0");
        assert_eq!(parse_polynomial("-x3", 3).unwrap().to_string(), "-x3");
        assert_eq!(parse_polynomial("3x1x2", 3).unwrap().to_string(), "3*x1*x2");
    }

    #[test]
    fn errors_carry_position() {
        match parse_polynomial("x1 + x4", 3) {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_polynomial("x1 +", 3).is_err());
        assert!(parse_polynomial("1/0", 3).is_err());
        assert!(parse_polynomial("", 3).is_err());
        assert!(parse_polynomial("x1 ** x2", 3).is_err());
    }
}
