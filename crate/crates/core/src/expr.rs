//! Expression syntax for series, coefficients and additive polynomials.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! exponent:= int ('^' int)* | '(' ['-'] int ['/' int] ')'
//! atom    := int | 't' | 'g' | name | name '(' args ')' | string | '(' sum ')'
//! ```
//!
//! `t` is the uniformizer and `g` the generator of an extension field.
//! Integer exponent towers associate to the right: `x^2^3 = x^8`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigInt),
    T,
    G,
    Var(String),
    Str(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rat),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Str(String),
    Sym(char),
    End,
}

struct Lexer;

impl Lexer {
    fn run(text: &str) -> Result<Vec<(Tok, usize)>> {
        let chars: Vec<char> = text.chars().collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push((Tok::Int(s.parse().unwrap()), col));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            } else if c == '"' {
                let start = i + 1;
                i += 1;
                while i < chars.len() && chars[i] != '"' {
                    i += 1;
                }
                if i == chars.len() {
                    return Err(Error::parse(col, "unterminated string"));
                }
                out.push((Tok::Str(chars[start..i].iter().collect()), col));
                i += 1;
            } else if "+-*/^(),".contains(c) {
                out.push((Tok::Sym(c), col));
                i += 1;
            } else {
                return Err(Error::parse(col, format!("unexpected character `{c}`")));
            }
        }
        out.push((Tok::End, chars.len() + 1));
        Ok(out)
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

const MAX_TOWER: u64 = 1 << 20;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(self.col(), format!("expected `{c}`")))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            _ => Err(Error::parse(self.col(), "expected an integer")),
        }
    }

    fn exponent(&mut self) -> Result<Rat> {
        let col = self.col();
        if self.eat('(') {
            let neg = self.eat('-');
            let num = self.int()?;
            let den = if self.eat('/') { self.int()? } else { BigInt::one() };
            if den.is_zero() {
                return Err(Error::parse(col, "zero denominator in exponent"));
            }
            self.expect(')')?;
            let r = Rat::new(num, den);
            return Ok(if neg { -r } else { r });
        }
        if !matches!(self.peek(), Tok::Int(_)) {
            return Err(Error::parse(
                col,
                "expected an exponent: an integer or a parenthesized rational",
            ));
        }
        let mut tower = vec![(self.int()?, col)];
        while self.peek() == &Tok::Sym('^') {
            self.bump();
            let col = self.col();
            tower.push((self.int()?, col));
        }
        let (mut acc, _) = tower.pop().unwrap();
        while let Some((base, col)) = tower.pop() {
            let e = acc
                .to_u64()
                .filter(|&e| e <= 64)
                .ok_or_else(|| Error::parse(col, "exponent tower too large"))?;
            acc = num_traits::pow(base, e as usize);
            if acc > BigInt::from(MAX_TOWER) {
                return Err(Error::parse(col, "exponent tower too large"));
            }
        }
        Ok(Rat::from_int(acc))
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Num(n)),
            Tok::Str(s) => Ok(Expr::Str(s)),
            Tok::Ident(name) => {
                if self.eat('(') {
                    let mut args = Vec::new();
                    if !self.eat(')') {
                        loop {
                            args.push(self.sum()?);
                            if self.eat(')') {
                                break;
                            }
                            self.expect(',')?;
                        }
                    }
                    return Ok(Expr::Call(name, args));
                }
                Ok(match name.as_str() {
                    "t" => Expr::T,
                    "g" => Expr::G,
                    _ => Expr::Var(name),
                })
            }
            Tok::Sym('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => Err(Error::parse(col, "unexpected end of input")),
            Tok::Sym(c) => Err(Error::parse(col, format!("unexpected `{c}`"))),
        }
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: Lexer::run(text)?,
        pos: 0,
    };
    let e = p.sum()?;
    if p.peek() != &Tok::End {
        return Err(Error::parse(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Num(n) if n.is_negative() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.prec() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.prec();
        match self {
            Expr::Num(n) => write!(f, "{n}"),
            Expr::T => write!(f, "t"),
            Expr::G => write!(f, "g"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Str(s) => write!(f, "\"{s}\""),
            Expr::Neg(e) => {
                write!(f, "-")?;
                wrap(f, e, p)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => "*",
                    _ => "/",
                };
                wrap(f, a, p)?;
                write!(f, "{op}")?;
                wrap(f, b, p + 1)
            }
            Expr::Pow(b, e) => {
                wrap(f, b, 5)?;
                if e.is_integer() && !e.is_negative() {
                    write!(f, "^{e}")
                } else {
                    write!(f, "^({e})")
                }
            }
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}
