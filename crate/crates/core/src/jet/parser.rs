//! Recursive-descent parser for jet expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' int)?
//! atom   := int | 't' | 'u' '[' int ']' '^' int | '(' expr ')'
//! ```
//! A second `^` after a power, or after `u[k]^a`, is rejected.

use num_bigint::BigInt;

use super::{JetExpr, JetSpace};
use crate::error::{Error, Result};
use crate::poly::RatFunc;
use crate::scalar::Scalar;

struct Parser<'a> {
    space: &'a JetSpace,
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

pub(super) fn parse_expression(space: &JetSpace, text: &str) -> Result<JetExpr> {
    if !text.is_ascii() {
        let pos = text
            .char_indices()
            .find(|(_, c)| !c.is_ascii())
            .map_or(0, |(i, _)| i);
        return err(pos, "non-ASCII character");
    }
    let mut p = Parser {
        space,
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return err(0, "empty expression");
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return err(p.pos, format!("unexpected '{}'", p.src[p.pos] as char));
    }
    Ok(e)
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
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

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => err(
                self.pos,
                format!("expected '{}', found '{}'", c as char, x as char),
            ),
            None => err(
                self.pos,
                format!("expected '{}', found end of input", c as char),
            ),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected an integer");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(s.parse().expect("digits"))
    }

    fn small_integer(&mut self, what: &str) -> Result<(usize, usize)> {
        self.skip_ws();
        let at = self.pos;
        let v = self.integer()?;
        match usize::try_from(&v) {
            Ok(x) if x <= u16::MAX as usize => Ok((x, at)),
            _ => err(at, format!("{what} too large")),
        }
    }

    fn expr(&mut self) -> Result<JetExpr> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<JetExpr> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' {
                &acc * &rhs
            } else {
                acc.checked_div(&rhs).ok_or(Error::DivisionByZero)?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<JetExpr> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<JetExpr> {
        let (base, is_jet_var) = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        if is_jet_var {
            return err(self.pos, "ambiguous power of u[k]^a; use parentheses");
        }
        self.pos += 1;
        let (e, at) = self.small_integer("exponent")?;
        if e == 0 {
            return err(at, "exponent must be positive");
        }
        if self.peek() == Some(b'^') {
            return err(self.pos, "ambiguous repeated power; use parentheses");
        }
        Ok(base.pow(e as u32))
    }

    fn atom(&mut self) -> Result<(JetExpr, bool)> {
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok((e, false))
            }
            Some(b't') => {
                self.pos += 1;
                self.no_identifier_tail()?;
                Ok((self.space.t(), false))
            }
            Some(b'u') => {
                self.pos += 1;
                self.expect(b'[')?;
                let (k, kat) = self.small_integer("jet order")?;
                self.expect(b']')?;
                self.expect(b'^')?;
                let (a, aat) = self.small_integer("component")?;
                if k > self.space.order() {
                    return Err(Error::Parse {
                        pos: kat,
                        msg: format!("jet order {k} exceeds the bound {}", self.space.order()),
                    });
                }
                if a == 0 || a > self.space.m() {
                    return err(aat, format!("component {a} outside 1..={}", self.space.m()));
                }
                Ok((self.space.u(k, a), true))
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok((RatFunc::constant(Scalar::from_integer(v)), false))
            }
            Some(c) => err(at.max(self.pos), format!("unexpected '{}'", c as char)),
            None => err(self.pos, "unexpected end of input"),
        }
    }

    fn no_identifier_tail(&self) -> Result<()> {
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphanumeric() || *c == b'_' => err(
                self.pos,
                format!("unknown identifier character '{}'", *c as char),
            ),
            _ => Ok(()),
        }
    }
}
