//! Recursive-descent parser for Puiseux-monomial curves.
//!
//! ```text
//! curve    ::= coord (';' coord)+ ['@' number]
//! coord    ::= [sign] term (sign term)*
//! term     ::= number ['*'] 't' ['^' exponent] | 't' ['^' exponent] | number
//! exponent ::= '(' [sign] int ['/' int] ')' | int
//! ```
//!
//! Whitespace is allowed between tokens. Error positions are 1-based
//! character columns; end of input reports one past the last character.

use thiserror::Error;

use crate::puiseux::PuiseuxExpr;
use crate::rational::Rational;
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    pub column: usize,
    pub message: String,
}

pub(crate) struct ParsedCurve<T> {
    pub coords: Vec<PuiseuxExpr<T>>,
    pub t0: Option<T>,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Self {
        Parser { chars: src.chars().collect(), pos: 0 }
    }

    fn err<R>(&self, message: impl Into<String>) -> Result<R, ParseError> {
        Err(ParseError { column: self.pos + 1, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    /// Unsigned decimal literal with optional fraction and exponent.
    fn number<T: Real>(&mut self) -> Result<T, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let int = self.digits();
        let mut text = int.clone();
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            let frac = self.digits();
            if int.is_empty() && frac.is_empty() {
                self.pos = start;
                return self.err("expected a number");
            }
            text.push('.');
            text.push_str(&frac);
        } else if int.is_empty() {
            return self.err("expected a number");
        }
        if matches!(self.chars.get(self.pos), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            let mut exp = String::from("e");
            if let Some(&s @ ('+' | '-')) = self.chars.get(self.pos) {
                exp.push(s);
                self.pos += 1;
            }
            let d = self.digits();
            if d.is_empty() {
                self.pos = save;
            } else {
                exp.push_str(&d);
                text.push_str(&exp);
            }
        }
        match text.parse::<f64>() {
            Ok(v) => Ok(T::lit(v)),
            Err(_) => {
                self.pos = start;
                self.err("malformed number")
            }
        }
    }

    fn unsigned_int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let d = self.digits();
        if d.is_empty() {
            return self.err("expected an integer");
        }
        d.parse().or_else(|_| self.err("integer out of range"))
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let neg = if self.eat('-') {
                    true
                } else {
                    self.eat('+');
                    false
                };
                let num = self.unsigned_int()?;
                let den = if self.eat('/') {
                    let d = self.unsigned_int()?;
                    if d == 0 {
                        return self.err("zero denominator");
                    }
                    d
                } else {
                    1
                };
                self.expect(')')?;
                Ok(Rational::new(if neg { -num } else { num }, den))
            }
            Some(c) if c.is_ascii_digit() => Ok(Rational::from_integer(self.unsigned_int()?)),
            _ => self.err("expected '(' or an integer after '^'"),
        }
    }

    fn power_of_t(&mut self) -> Result<Rational, ParseError> {
        self.expect('t')?;
        if self.eat('^') {
            self.exponent()
        } else {
            Ok(Rational::one())
        }
    }

    fn term<T: Real>(&mut self) -> Result<(T, Rational), ParseError> {
        match self.peek() {
            Some('t') => Ok((T::one(), self.power_of_t()?)),
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let coeff = self.number::<T>()?;
                let star = self.eat('*');
                if self.peek() == Some('t') {
                    Ok((coeff, self.power_of_t()?))
                } else if star {
                    self.err("expected 't' after '*'")
                } else {
                    Ok((coeff, Rational::zero()))
                }
            }
            _ => self.err("expected a term"),
        }
    }

    fn coord<T: Real>(&mut self) -> Result<PuiseuxExpr<T>, ParseError> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') {
            -T::one()
        } else {
            self.eat('+');
            T::one()
        };
        loop {
            let (c, q) = self.term::<T>()?;
            terms.push((sign * c, q));
            sign = if self.eat('+') {
                T::one()
            } else if self.eat('-') {
                -T::one()
            } else {
                break;
            };
        }
        Ok(PuiseuxExpr::new(terms))
    }

    fn curve<T: Real>(&mut self) -> Result<ParsedCurve<T>, ParseError> {
        let mut coords = vec![self.coord::<T>()?];
        while self.eat(';') {
            coords.push(self.coord::<T>()?);
        }
        if coords.len() < 2 {
            return self.err("a curve needs at least two coordinates separated by ';'");
        }
        let t0 = if self.eat('@') { Some(self.number::<T>()?) } else { None };
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        Ok(ParsedCurve { coords, t0 })
    }
}

pub(crate) fn parse<T: Real>(text: &str) -> Result<ParsedCurve<T>, ParseError> {
    Parser::new(text).curve()
}
