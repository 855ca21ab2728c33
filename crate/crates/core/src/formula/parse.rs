//! Recursive-descent parser for the formula grammar:
//!
//! ```text
//! expr   := term ('|' term)*
//! term   := factor ('&' factor)*
//! factor := '!' factor | '(' expr ')' | 'x' digits
//! ```
//!
//! `&` and `|` are left-associative, `!` binds tightest, and whitespace
//! between tokens is insignificant. Offsets in errors are byte positions.

use thiserror::Error;

use super::{Expr, Formula, FormulaError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {expected}, found {found:?}")]
    Unexpected {
        offset: usize,
        expected: &'static str,
        found: char,
    },
    #[error("syntax error at offset {offset}: expected {expected}, found end of input")]
    UnexpectedEnd {
        offset: usize,
        expected: &'static str,
    },
    #[error("syntax error at offset {offset}: variable index has no digits")]
    MissingDigits { offset: usize },
    #[error("syntax error at offset {offset}: variable index too large to parse")]
    IndexOverflow { offset: usize },
    #[error("at offset {offset}: variable index {index} out of range for {num_vars} variables")]
    VarOutOfRange {
        offset: usize,
        index: usize,
        num_vars: usize,
    },
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Parses a formula over `num_vars` declared variables.
pub fn parse_formula(text: &str, num_vars: usize) -> Result<Formula, ParseError> {
    let mut parser = Parser {
        input: text.as_bytes(),
        pos: 0,
        num_vars,
    };
    let expr = parser.expr()?;
    parser.skip_ws();
    if let Some(found) = parser.peek() {
        return Err(ParseError::Unexpected {
            offset: parser.pos,
            expected: "end of input, '&', or '|'",
            found,
        });
    }
    Ok(Formula::new(expr, num_vars)?)
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    num_vars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.input.get(self.pos).map(|&b| b as char)
    }

    fn skip_ws(&mut self) {
        while matches!(self.input.get(self.pos), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('|') {
                self.pos += 1;
                let rhs = self.term()?;
                lhs = Expr::or(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some('&') {
                self.pos += 1;
                let rhs = self.factor()?;
                lhs = Expr::and(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                Ok(Expr::not(self.factor()?))
            }
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                match self.peek() {
                    Some(')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    Some(found) => Err(ParseError::Unexpected {
                        offset: self.pos,
                        expected: "')'",
                        found,
                    }),
                    None => Err(ParseError::UnexpectedEnd {
                        offset: self.pos,
                        expected: "')'",
                    }),
                }
            }
            Some('x') => {
                self.pos += 1;
                self.variable()
            }
            Some(found) => Err(ParseError::Unexpected {
                offset: self.pos,
                expected: "'!', '(', or a variable",
                found,
            }),
            None => Err(ParseError::UnexpectedEnd {
                offset: self.pos,
                expected: "'!', '(', or a variable",
            }),
        }
    }

    /// Digits must follow `x` immediately: `x 3` is not a variable.
    fn variable(&mut self) -> Result<Expr, ParseError> {
        let digits_start = self.pos;
        while matches!(self.input.get(self.pos), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(ParseError::MissingDigits {
                offset: digits_start,
            });
        }
        let digits = std::str::from_utf8(&self.input[digits_start..self.pos])
            .expect("digits are ASCII");
        let index: usize = digits.parse().map_err(|_| ParseError::IndexOverflow {
            offset: digits_start,
        })?;
        if index >= self.num_vars {
            return Err(ParseError::VarOutOfRange {
                offset: digits_start - 1,
                index,
                num_vars: self.num_vars,
            });
        }
        Ok(Expr::var(index))
    }
}
