//! Textual polynomial format: `1*x^4 + 2*x^2*y^2 - 3/2*y + 7`.
//!
//! Coefficients are signed integers, fractions `p/q` or decimals (read
//! exactly). Factors may repeat (`x*x^2`) and a bare monomial has
//! coefficient 1.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use super::{BivariatePoly, Monomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg} (at position {pos})")]
pub struct ParsePolyError {
    pub pos: usize,
    pub msg: String,
}

impl From<ParsePolyError> for crate::Error {
    fn from(e: ParsePolyError) -> Self {
        crate::Error::Parse { pos: e.pos, msg: e.msg }
    }
}

fn write_coefficient(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.denom().is_one() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write_coefficient(f, &c.abs())?;
            for (var, e) in [('x', m.x), ('y', m.y)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{var}")?,
                    _ => write!(f, "*{var}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl FromStr for BivariatePoly {
    type Err = ParsePolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let terms = parse_terms(s, &['x', 'y'])?;
        Ok(BivariatePoly::from_terms(terms.into_iter().map(|(c, e)| (Monomial::new(e[0], e[1]), c))))
    }
}

/// Parses a univariate polynomial in `var`; returns ascending coefficients.
pub fn parse_univariate(s: &str, var: char) -> Result<Vec<BigRational>, ParsePolyError> {
    let terms = parse_terms(s, &[var])?;
    let deg = terms.iter().map(|(_, e)| e[0]).max().unwrap_or(0) as usize;
    let mut out = vec![BigRational::zero(); deg + 1];
    for (c, e) in terms {
        out[e[0] as usize] += c;
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParsePolyError {
        ParsePolyError { pos: self.pos, msg: msg.into() }
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<BigRational, ParsePolyError> {
        let start = self.pos;
        let int_part = self.digits();
        if int_part.is_empty() {
            return Err(self.err("expected a number"));
        }
        let mut value = BigRational::from_integer(int_part.parse::<BigInt>().unwrap());
        if self.peek() == Some('.') {
            self.bump();
            let frac = self.digits();
            if frac.is_empty() {
                return Err(self.err("expected digits after decimal point"));
            }
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            value += BigRational::new(frac.parse::<BigInt>().unwrap(), scale);
        }
        if self.peek() == Some('/') {
            self.bump();
            let den_pos = self.pos;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.err("expected denominator"));
            }
            let den = den.parse::<BigInt>().unwrap();
            if den.is_zero() {
                return Err(ParsePolyError { pos: den_pos, msg: "zero denominator".into() });
            }
            value /= BigRational::from_integer(den);
        }
        debug_assert!(self.pos > start);
        Ok(value)
    }
}

type Term = (BigRational, Vec<u32>);

fn parse_terms(src: &str, vars: &[char]) -> Result<Vec<Term>, ParsePolyError> {
    let mut cur = Cursor { src, pos: 0 };
    let mut terms = Vec::new();
    cur.skip_ws();
    if cur.peek().is_none() {
        return Err(cur.err("empty polynomial"));
    }
    let mut first = true;
    loop {
        cur.skip_ws();
        let mut sign = BigRational::one();
        match cur.peek() {
            Some('+') if !first => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                sign = -sign;
            }
            Some('+') => {
                cur.bump();
            }
            _ if !first => return Err(cur.err("expected '+' or '-'")),
            _ => {}
        }
        cur.skip_ws();
        let (c, e) = parse_term(&mut cur, vars)?;
        terms.push((sign * c, e));
        first = false;
        cur.skip_ws();
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(terms)
}

fn parse_term(cur: &mut Cursor<'_>, vars: &[char]) -> Result<Term, ParsePolyError> {
    let mut coeff = BigRational::one();
    let mut exps = vec![0u32; vars.len()];
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(c) if c.is_ascii_digit() => coeff *= cur.number()?,
            Some(c) if vars.contains(&c) => {
                cur.bump();
                let idx = vars.iter().position(|v| *v == c).unwrap();
                cur.skip_ws();
                let mut e = 1u32;
                if cur.peek() == Some('^') {
                    cur.bump();
                    cur.skip_ws();
                    let d = cur.digits();
                    e = d.parse().map_err(|_| cur.err("expected exponent"))?;
                }
                exps[idx] += e;
            }
            Some(c) => return Err(cur.err(format!("unexpected character '{c}'"))),
            None => return Err(cur.err("unexpected end of input")),
        }
        cur.skip_ws();
        if cur.peek() == Some('*') {
            cur.bump();
        } else {
            break;
        }
    }
    Ok((coeff, exps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{integer, rational};

    #[test]
    fn prints_cassini_in_documented_form() {
        let p = crate::poly::FamilySpec::cassini(integer(1)).build().unwrap();
        assert_eq!(p.to_string(), "1*x^4 + 2*x^2*y^2 + 1*y^4 - 2*x^2 + 2*y^2");
    }

    #[test]
    fn parses_documented_form() {
        let p: BivariatePoly = "1*x^4 + 2*x^2*y^2 + 1*y^4 - 2*x^2 + 2*y^2".parse().unwrap();
        assert_eq!(p, crate::poly::FamilySpec::cassini(integer(1)).build().unwrap());
    }

    #[test]
    fn square_of_sum() {
        let lhs: BivariatePoly = "x + y".parse().unwrap();
        let rhs: BivariatePoly = "x^2 + 2*x*y + y^2".parse().unwrap();
        assert_eq!(lhs.pow(2), rhs);
        let x: BivariatePoly = "x".parse().unwrap();
        let y: BivariatePoly = "y".parse().unwrap();
        assert_ne!(x, y);
    }

    #[test]
    fn fractions_and_decimals() {
        let p: BivariatePoly = "-3/4*x + 0.25*y - 2".parse().unwrap();
        assert_eq!(p.coefficient(1, 0), rational(-3, 4));
        assert_eq!(p.coefficient(0, 1), rational(1, 4));
        assert_eq!(p.coefficient(0, 0), integer(-2));
        assert_eq!(p.to_string(), "-3/4*x + 1/4*y - 2");
    }

    #[test]
    fn error_positions() {
        let e = "1*x^2 + 3*z".parse::<BivariatePoly>().unwrap_err();
        assert_eq!(e.pos, 10);
        let e = "1/0*x".parse::<BivariatePoly>().unwrap_err();
        assert_eq!(e.pos, 2);
        let e = "x y".parse::<BivariatePoly>().unwrap_err();
        assert_eq!(e.pos, 2);
        assert!("".parse::<BivariatePoly>().is_err());
    }

    #[test]
    fn univariate() {
        let c = parse_univariate("t + t^3", 't').unwrap();
        assert_eq!(c, vec![integer(0), integer(1), integer(0), integer(1)]);
    }

    #[test]
    fn zero_prints_as_zero() {
        assert_eq!(BivariatePoly::zero().to_string(), "0");
        assert!("0".parse::<BivariatePoly>().unwrap().is_zero());
    }
}
