//! Recursive-descent parser shared by the cyclotomic and polynomial grammars.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('-'|'+') unary | factor
//! factor := base ('^' natural)?
//! base   := rational | ident | '(' expr ')'
//! rational := integer ('/' positive-integer)?
//! ```
//!
//! The parser is generic over a [`Builder`] that interprets the syntax tree on
//! the fly, so the same code produces field elements or polynomials.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Semantic actions invoked by [`parse`].
pub trait Builder {
    type Value;

    fn rational(&mut self, value: BigRational) -> Result<Self::Value>;
    /// `pos` is the byte offset of the identifier, used for error messages.
    fn ident(&mut self, name: &str, pos: usize) -> Result<Self::Value>;
    fn add(&mut self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn sub(&mut self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn mul(&mut self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn neg(&mut self, a: Self::Value) -> Result<Self::Value>;
    fn pow(&mut self, a: Self::Value, exp: u32) -> Result<Self::Value>;
}

/// Parse `text` completely, driving `builder`.
pub fn parse<B: Builder>(text: &str, builder: &mut B) -> Result<B::Value> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, builder };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err(format!("unexpected character `{}`", p.src[p.pos] as char)));
    }
    Ok(v)
}

struct Parser<'a, B> {
    src: &'a [u8],
    pos: usize,
    builder: &'a mut B,
}

impl<B: Builder> Parser<'_, B> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<B::Value> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.builder.add(acc, rhs)?;
                }
                b'-' => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = self.builder.sub(acc, rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<B::Value> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = self.builder.mul(acc, rhs)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<B::Value> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                let v = self.unary()?;
                self.builder.neg(v)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<B::Value> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected natural exponent after `^`"));
            }
            let exp: u32 = digits.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("exponent `{digits}` out of range"),
            })?;
            return self.builder.pow(base, exp);
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn base(&mut self) -> Result<B::Value> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digit run");
                let mut value = BigRational::from_integer(num);
                // A slash is only accepted as part of a rational literal.
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let ds = self.digits();
                    if ds.is_empty() {
                        return Err(self.err("expected positive integer denominator after `/`"));
                    }
                    let den: BigInt = ds.parse().expect("digit run");
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                self.builder.rational(value)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                self.builder.ident(name, start)
            }
            Some(c) => Err(self.err(format!("unexpected character `{}`", c as char))),
        }
    }
}

/// Render a rational the way the grammar reads it back (`3`, `-1/2`).
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Evaluates rational arithmetic; identifiers are rejected.
    struct Eval;

    impl Builder for Eval {
        type Value = BigRational;
        fn rational(&mut self, v: BigRational) -> Result<BigRational> {
            Ok(v)
        }
        fn ident(&mut self, name: &str, _pos: usize) -> Result<BigRational> {
            Err(Error::UnknownVariable(name.into()))
        }
        fn add(&mut self, a: BigRational, b: BigRational) -> Result<BigRational> {
            Ok(a + b)
        }
        fn sub(&mut self, a: BigRational, b: BigRational) -> Result<BigRational> {
            Ok(a - b)
        }
        fn mul(&mut self, a: BigRational, b: BigRational) -> Result<BigRational> {
            Ok(a * b)
        }
        fn neg(&mut self, a: BigRational) -> Result<BigRational> {
            Ok(-a)
        }
        fn pow(&mut self, a: BigRational, e: u32) -> Result<BigRational> {
            Ok(num_traits::pow(a, e as usize))
        }
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn precedence_and_unary_minus() {
        assert_eq!(parse("1+2*3", &mut Eval).unwrap(), q(7, 1));
        assert_eq!(parse("-2^2", &mut Eval).unwrap(), q(-4, 1));
        assert_eq!(parse("(1/2 - 1/3) * 6", &mut Eval).unwrap(), q(1, 1));
        assert_eq!(parse(" 3 - -2 ", &mut Eval).unwrap(), q(5, 1));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse("1 + * 2", &mut Eval) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("(1+2", &mut Eval), Err(Error::Syntax { .. })));
        assert!(matches!(parse("2^", &mut Eval), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1/0", &mut Eval), Err(Error::Syntax { .. })));
        assert!(matches!(parse("2 3", &mut Eval), Err(Error::Syntax { pos: 2, .. })));
    }

    #[test]
    fn rational_printing_round_trips() {
        for r in [q(0, 1), q(-7, 3), q(12, 1)] {
            assert_eq!(parse(&fmt_rational(&r), &mut Eval).unwrap(), r);
        }
    }
}
