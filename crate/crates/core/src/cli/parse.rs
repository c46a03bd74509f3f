//! Parser for operator expressions.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" "-"? INT)?
//! atom   := INT | "x" | "eps" | "D" | "(" expr ")"
//! ```
//!
//! `*` is composition, so `D*x` is `x D + 1`. `a / b` is `a * b^(-1)` and
//! needs `b = c x^n` with rational `c`. Only `D` itself may be raised to a
//! power among operators; negative powers need a monomial base. `#` starts
//! a comment running to the end of the line.

use num_bigint::BigInt;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::exact::{Rational, XLaurent};

type Op = DiffOp<XLaurent>;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X,
    Eps,
    D,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number `{n}`"),
        Tok::X => "`x`".into(),
        Tok::Eps => "`eps`".into(),
        Tok::D => "`D`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (l, col) = (line, column);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l, column: col });
        match ch {
            '\n' => {
                chars.next();
                line += 1;
                column = 1;
                continue;
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
                continue;
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    s.push(d);
                    chars.next();
                    column += 1;
                }
                push(&mut out, Tok::Int(s.parse().expect("digits")));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek().filter(|d| d.is_ascii_alphanumeric() || **d == '_') {
                    s.push(d);
                    chars.next();
                    column += 1;
                }
                let tok = match s.as_str() {
                    "x" => Tok::X,
                    "eps" => Tok::Eps,
                    "D" => Tok::D,
                    _ => return Err(Error::Parse { line: l, column: col, message: format!("unknown symbol `{s}`") }),
                };
                push(&mut out, tok);
                continue;
            }
            _ => {
                let tok = match ch {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    _ => return Err(Error::Parse { line: l, column: col, message: format!("unexpected character `{ch}`") }),
                };
                chars.next();
                push(&mut out, tok);
            }
        }
        column += 1;
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, message: impl Into<String>) -> Error {
        Error::Parse { line: t.line, column: t.column, message: message.into() }
    }

    fn expr(&mut self) -> Result<Op> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Op> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = acc.compose(&self.unary()?);
                }
                Tok::Slash => {
                    let at = self.next();
                    let rhs = self.unary()?;
                    let inv = monomial_inverse(&rhs).ok_or_else(|| {
                        Self::error_at(&at, "division only by rational constants and x-monomials")
                    })?;
                    acc = acc.compose(&DiffOp::multiplication(inv));
                }
                Tok::Int(_) | Tok::X | Tok::Eps | Tok::D | Tok::LParen => {
                    let t = self.peek().clone();
                    return Err(Self::error_at(
                        &t,
                        format!("expected an operator before {} (implicit multiplication is not allowed)", describe(&t.tok)),
                    ));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Op> {
        if self.peek().tok == Tok::Minus {
            self.next();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Op> {
        let start = self.peek().clone();
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let caret = self.next();
        let negative = if self.peek().tok == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let et = self.next();
        let Tok::Int(n) = &et.tok else {
            return Err(Self::error_at(&et, format!("expected an integer exponent, found {}", describe(&et.tok))));
        };
        let k: u32 = n.try_into().map_err(|_| Self::error_at(&et, "exponent too large"))?;
        if start.tok == Tok::D {
            if negative {
                return Err(Self::error_at(&caret, "negative power of D"));
            }
            return Ok(DiffOp::d_pow(k as usize));
        }
        if base.order().is_some_and(|o| o > 0) {
            return Err(Self::error_at(&caret, "only D may be raised to a power among operators"));
        }
        let c = base.coeff(0);
        if negative {
            let inv = monomial_inverse(&base).ok_or_else(|| Self::error_at(&caret, "negative power of a non-monomial"))?;
            return Ok(DiffOp::multiplication(inv.pow(k)));
        }
        Ok(DiffOp::multiplication(c.pow(k)))
    }

    fn atom(&mut self) -> Result<Op> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Int(n) => Ok(DiffOp::multiplication(XLaurent::constant(Rational::from_integer(n)))),
            Tok::X => Ok(DiffOp::multiplication(XLaurent::x())),
            Tok::Eps => Ok(DiffOp::multiplication(XLaurent::term(Rational::from_integer(1.into()), 1, 0))),
            Tok::D => Ok(DiffOp::d_pow(1)),
            Tok::LParen => {
                let inner = self.expr()?;
                let close = self.next();
                if close.tok != Tok::RParen {
                    return Err(Self::error_at(&close, format!("expected `)`, found {}", describe(&close.tok))));
                }
                Ok(inner)
            }
            other => Err(Self::error_at(&t, format!("expected a value, found {}", describe(&other)))),
        }
    }
}

/// `(c x^n)^(-1)` if `op` is a nonzero rational multiple of a power of `x`.
fn monomial_inverse(op: &Op) -> Option<XLaurent> {
    if op.order()? != 0 {
        return None;
    }
    op.coeff(0).unit_inverse()
}

/// Parses one operator expression.
pub fn parse_op(text: &str) -> Result<DiffOp<XLaurent>> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    if p.peek().tok == Tok::End {
        let t = p.peek().clone();
        return Err(Parser::error_at(&t, "empty expression"));
    }
    let op = p.expr()?;
    let t = p.peek().clone();
    match t.tok.clone() {
        Tok::End => Ok(op),
        Tok::RParen => Err(Parser::error_at(&t, "unbalanced `)`")),
        other => Err(Parser::error_at(&t, format!("unexpected {}", describe(&other)))),
    }
}
