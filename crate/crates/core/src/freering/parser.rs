//! Recursive-descent parser for ring expressions.
//!
//! ```text
//! expr   := ["-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := integer | variable | "[" expr ("," expr)+ "]" | "(" expr ")"
//! ```
//!
//! A bracket with k entries is the left-normed commutator of its entries.
//! The optional leading minus lets the canonical printer's output parse back.

use num_bigint::BigInt;
use thiserror::Error;

use super::{left_normed, Family, Polynomial, Variable};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

pub fn parse_expression(text: &str) -> Result<Polynomial, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        open: Vec::new(),
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    // Offsets of currently open brackets, innermost last.
    open: Vec<usize>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: String) -> ParseError {
        ParseError {
            offset: self.pos,
            message,
        }
    }

    fn eof_error(&self) -> ParseError {
        match self.open.last() {
            Some(&offset) => ParseError {
                offset,
                message: "unclosed bracket".to_string(),
            },
            None => self.error("unexpected end of input".to_string()),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let negate = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc += &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let Some(c) = self.peek() else {
            return Err(self.eof_error());
        };
        match c {
            b'0'..=b'9' => {
                let digits = self.digits();
                let value: BigInt = digits.parse().expect("ascii digits");
                Ok(Polynomial::constant(value))
            }
            b'(' => {
                self.open.push(self.pos);
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                self.open.pop();
                Ok(inner)
            }
            b'[' => {
                let start = self.pos;
                self.open.push(start);
                self.pos += 1;
                let mut args = vec![self.expr()?];
                while self.peek() == Some(b',') {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                self.expect(b']')?;
                self.open.pop();
                if args.len() < 2 {
                    return Err(ParseError {
                        offset: start,
                        message: "a commutator bracket needs at least two entries".to_string(),
                    });
                }
                Ok(left_normed(&args).expect("non-empty"))
            }
            c if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let family = Family::from_char(c as char).ok_or_else(|| ParseError {
                    offset: start,
                    message: format!("unknown variable family '{}'", c as char),
                })?;
                self.pos += 1;
                if !matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
                    return Err(self.error("expected a variable index".to_string()));
                }
                let digits = self.digits();
                let index: u32 = digits.parse().map_err(|_| ParseError {
                    offset: start,
                    message: "variable index out of range".to_string(),
                })?;
                if index == 0 {
                    return Err(ParseError {
                        offset: start,
                        message: "variable indices start at 1".to_string(),
                    });
                }
                Ok(Polynomial::var(Variable::new(family, index)))
            }
            other => Err(self.error(format!("unexpected '{}'", other as char))),
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while matches!(self.src.get(self.pos), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn expect(&mut self, want: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{}', found '{}'", want as char, c as char))),
            None => Err(self.eof_error()),
        }
    }
}
