//! Parser for the canonical text form of polynomials and rational
//! expressions.
//!
//! Grammar (usual precedence, `^` binds tightest, unary minus below `^`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := number | 'i' | identifier | '(' expr ')'
//! ```
//!
//! Numbers are integers or finite decimals; `i` is the imaginary unit.
//! Everything the printers emit parses back to an equal value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::ParseError;
use crate::mpoly::MPoly;
use crate::ratfunc::RatFunc;
use crate::ring::Ring;
use crate::scalar::GaussRat;

type PResult<T> = std::result::Result<T, ParseError>;

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, chars: src.char_indices().collect(), pos: 0 }
    }

    fn error_at(&self, pos: usize, msg: impl Into<String>) -> ParseError {
        let byte = self.chars.get(pos).map_or(self.src.len(), |&(b, _)| b);
        let before = &self.src[..byte];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError::new(line, column, msg)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| match c {
            '\u{2212}' => '-',
            '\u{00b7}' => '*',
            c => c,
        })
    }

    fn expr(&mut self) -> PResult<RatFunc> {
        let mut acc = self.term()?;
        while let Some(op @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> PResult<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' {
                &acc * &rhs
            } else {
                let inv = rhs.inv().ok_or_else(|| self.error_at(at, "division by zero"))?;
                &acc * &inv
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> PResult<RatFunc> {
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<RatFunc> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let start = self.pos;
        let digits = self.take_while(|c| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(self.error_at(start, "expected integer exponent"));
        }
        let e: u32 = digits
            .parse()
            .map_err(|_| self.error_at(start, "exponent too large"))?;
        let p = base.pow(e);
        if negative {
            p.inv().ok_or_else(|| self.error_at(start, "negative power of zero"))
        } else {
            Ok(p)
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.pos += 1;
        }
        s
    }

    fn atom(&mut self) -> PResult<RatFunc> {
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => Err(self.error_at(start, "unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error_at(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let int = self.take_while(|c| c.is_ascii_digit());
                let mut value = BigRational::from_integer(
                    if int.is_empty() { BigInt::zero() } else { int.parse().expect("digits") },
                );
                if self.chars.get(self.pos).is_some_and(|&(_, c)| c == '.') {
                    self.pos += 1;
                    let frac = self.take_while(|c| c.is_ascii_digit());
                    if frac.is_empty() && int.is_empty() {
                        return Err(self.error_at(start, "malformed number"));
                    }
                    if !frac.is_empty() {
                        let scale = num_traits::pow(BigInt::from(10), frac.len());
                        let f: BigInt = frac.parse().expect("digits");
                        value += BigRational::new(f, scale);
                    }
                }
                Ok(RatFunc::from_poly(MPoly::constant(GaussRat::real(value))))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                if name == "i" {
                    Ok(RatFunc::from_poly(MPoly::constant(GaussRat::i())))
                } else {
                    Ok(RatFunc::from_poly(MPoly::var(&name)))
                }
            }
            Some(c) => Err(self.error_at(start, format!("unexpected character '{c}'"))),
        }
    }
}

/// Parse a rational expression.
pub fn parse_ratfunc(src: &str) -> Result<RatFunc, ParseError> {
    let mut p = Parser::new(src);
    let value = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error_at(p.pos, "unexpected trailing input"));
    }
    Ok(value)
}

/// Parse a polynomial; the expression may use division only by constants.
pub fn parse_mpoly(src: &str) -> Result<MPoly, ParseError> {
    let rf = parse_ratfunc(src)?;
    rf.to_mpoly()
        .ok_or_else(|| ParseError::new(1, 1, format!("`{src}` is not a polynomial")))
}

/// Parse a constant Gaussian rational such as `-3/4`, `2*i` or `(1-i)/2`.
pub fn parse_scalar(src: &str) -> Result<GaussRat, ParseError> {
    let p = parse_mpoly(src)?;
    p.as_constant()
        .ok_or_else(|| ParseError::new(1, 1, format!("`{src}` is not a constant")))
}
