//! Parameter expressions such as `theta1_2/(1 + t1) - 1/2*t2^2`.
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" integer)?
//! atom  := integer | name | "(" expr ")"
//! ```
//!
//! Products are taken left to right and truncated at the working degree;
//! `a / b` multiplies by the series inverse of the unit `b`.

use std::sync::Arc;

use linf_core::gspace::Scalar;
use linf_core::paramring::{ParamPoly, ParamRing};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprError {
    /// Byte offset into the expression.
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(u64),
    Name(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Token)>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let end = chars.get(j).map_or(s.len(), |x| x.0);
            let n = s[pos..end].parse().map_err(|_| ExprError {
                offset: pos,
                message: "integer too large".into(),
            })?;
            out.push((pos, Token::Int(n)));
            i = j;
        } else if c.is_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                j += 1;
            }
            let end = chars.get(j).map_or(s.len(), |x| x.0);
            out.push((pos, Token::Name(s[pos..end].to_string())));
            i = j;
        } else if "+-*/^()".contains(c) {
            out.push((pos, Token::Sym(c)));
            i += 1;
        } else {
            return Err(ExprError {
                offset: pos,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    ring: &'a Arc<ParamRing>,
    degree: u32,
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err(&self, message: impl Into<String>) -> ExprError {
        ExprError {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn peek_sym(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some((_, Token::Sym(c))) => Some(*c),
            _ => None,
        }
    }

    fn lift<T>(&self, r: linf_core::Result<T>) -> Result<T, ExprError> {
        r.map_err(|e| self.err(e.to_string()))
    }

    fn expr(&mut self) -> Result<ParamPoly, ExprError> {
        let mut acc = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek_sym() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = self.lift(if c == '+' { acc.add(&rhs) } else { acc.sub(&rhs) })?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamPoly, ExprError> {
        let mut acc = self.unary()?;
        while let Some(c @ ('*' | '/')) = self.peek_sym() {
            self.pos += 1;
            let at = self.offset();
            let mut rhs = self.unary()?;
            if c == '/' {
                rhs = rhs.inverse(self.degree).map_err(|_| ExprError {
                    offset: at,
                    message: "divisor is not a unit (zero constant term)".into(),
                })?;
            }
            acc = self.lift(acc.mul_truncated(&rhs, self.degree))?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParamPoly, ExprError> {
        if self.peek_sym() == Some('-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamPoly, ExprError> {
        let base = self.atom()?;
        if self.peek_sym() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let n = match self.tokens.get(self.pos) {
            Some((_, Token::Int(n))) => *n,
            _ => return Err(self.err("expected an integer exponent")),
        };
        self.pos += 1;
        let mut acc = ParamPoly::one(self.ring);
        for _ in 0..n {
            acc = self.lift(acc.mul_truncated(&base, self.degree))?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<ParamPoly, ExprError> {
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(self.err("unexpected end of expression"));
        };
        match tok {
            Token::Int(n) => {
                self.pos += 1;
                Ok(ParamPoly::constant(self.ring, Scalar::from_integer(n.into())))
            }
            Token::Name(name) => {
                let p = ParamPoly::generator(self.ring, &name).map_err(|_| {
                    let known = self.ring.names().join(", ");
                    self.err(format!("unknown parameter `{name}` (ring has: {known})"))
                })?;
                self.pos += 1;
                Ok(p)
            }
            Token::Sym('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek_sym() != Some(')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Token::Sym(c) => Err(self.err(format!("unexpected `{c}`"))),
        }
    }
}

/// Parses an expression over `ring`, truncating at `degree`.
pub fn parse(s: &str, ring: &Arc<ParamRing>, degree: u32) -> Result<ParamPoly, ExprError> {
    let mut p = Parser {
        tokens: lex(s)?,
        pos: 0,
        end: s.len(),
        ring,
        degree,
    };
    let out = p.expr()?;
    if p.pos < p.tokens.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out.truncated(degree))
}
