//! Recursive-descent parser for the expression DSL.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | factor
//! factor := atom ("^" exponent)?
//! exponent := signed-int | "(" signed-int ("/" int)? ")"
//! atom   := number | identifier | fn "(" expr ")" | "(" expr ")"
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Expr, Func};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("invalid number literal at offset {offset}")]
    InvalidNumber { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownFunction { offset, .. }
            | ParseError::InvalidNumber { offset } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let value = decimal_to_rational(&text[start..i]).ok_or(ParseError::InvalidNumber { offset: start })?;
            out.push((Tok::Num(value), start));
        } else if c.is_alphabetic() {
            while i < bytes.len() {
                let ch = text[i..].chars().next().unwrap();
                if ch.is_alphanumeric() || ch == '_' {
                    i += ch.len_utf8();
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else {
            let sym = match c {
                '∧' => '&',
                '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' | '&' | '=' => c,
                _ => {
                    return Err(ParseError::Syntax {
                        offset: start,
                        expected: vec!["expression".into()],
                        found: format!("`{c}`"),
                    })
                }
            };
            i += c.len_utf8();
            out.push((Tok::Sym(sym), start));
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Exact value of a decimal literal such as `0.5` or `1.25e-3`.
pub(crate) fn decimal_to_rational(s: &str) -> Option<BigRational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(k) => (&mantissa[..k], &mantissa[k + 1..]),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let numer: BigInt = digits.parse().ok()?;
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(numer);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(r)
}

/// Token cursor shared with the differential-form parser.
pub(crate) struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    pub(crate) fn peek_at(&self, ahead: usize) -> &Tok {
        let k = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[k].0
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    pub(crate) fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.error(&["operator", "end of input"]))
        }
    }

    pub(crate) fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(self.term()?.neg());
            } else {
                break;
            }
        }
        Ok(Expr::add(terms))
    }

    pub(crate) fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat('*') {
                factors.push(self.unary()?);
            } else if self.eat('/') {
                factors.push(self.unary()?.recip());
            } else {
                break;
            }
        }
        Ok(Expr::mul(factors))
    }

    pub(crate) fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            Ok(self.unary()?.neg())
        } else {
            self.factor()
        }
    }

    pub(crate) fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            Ok(Expr::pow(base, e))
        } else {
            Ok(base)
        }
    }

    fn signed_int(&mut self) -> Result<BigInt, ParseError> {
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        match self.peek().clone() {
            Tok::Num(n) if n.is_integer() => {
                self.bump();
                let v = n.to_integer();
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.error(&["integer exponent"])),
        }
    }

    pub(crate) fn exponent(&mut self) -> Result<BigRational, ParseError> {
        if self.eat('(') {
            let num = self.signed_int()?;
            let den = if self.eat('/') {
                match self.peek().clone() {
                    Tok::Num(n) if n.is_integer() && !n.is_zero() => {
                        self.bump();
                        n.to_integer()
                    }
                    _ => return Err(self.error(&["nonzero integer denominator"])),
                }
            } else {
                BigInt::one()
            };
            self.expect(')')?;
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(self.signed_int()?))
        }
    }

    pub(crate) fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::rational(n))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::Sym('(') {
                    let func = Func::from_name(&name).ok_or(ParseError::UnknownFunction { name, offset })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Expr::apply(func, arg))
                } else {
                    Ok(Expr::var(name))
                }
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            _ => Err(self.error(&["number", "identifier", "function", "`(`", "`-`"])),
        }
    }
}

/// Parses DSL text into a canonical expression.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}
