//! Recursive-descent parser for
//!
//! ```text
//! identity := poly ( "=" | "<=" ) poly ;
//! poly     := term { "+" term } ;
//! term     := factor { ("*" | WS) factor } ;
//! factor   := VAR | "(" poly ")" ;
//! VAR      := [a-z][a-z0-9_]* ;
//! ```

use super::{Identity, Polynomial, Relation, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Plus,
    Star,
    LParen,
    RParen,
    Eq,
    Leq,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i], b'a'..=b'z' | b'0'..=b'9' | b'_') {
                    i += 1;
                }
                out.push((start, Tok::Var(text[start..i].to_string())));
            }
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b'=' => {
                out.push((i, Tok::Eq));
                i += 1;
            }
            b'<' if bytes.get(i + 1) == Some(&b'=') => {
                out.push((i, Tok::Leq));
                i += 2;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Polynomial::Sum(terms)
        })
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut factors = vec![self.factor()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    factors.push(self.factor()?);
                }
                Some(Tok::Var(_)) | Some(Tok::LParen) => factors.push(self.factor()?),
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Polynomial::Product(factors)
        })
    }

    fn factor(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Var(name)) => {
                self.pos += 1;
                Ok(Polynomial::Var(Var(name)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::RParen) {
                    return self.error("empty word");
                }
                let p = self.poly()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(p)
            }
            None => self.error("empty word"),
            Some(t) => self.error(format!("expected a variable or `(`, found {t:?}")),
        }
    }
}

fn parser(text: &str) -> Result<Parser> {
    Ok(Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
    })
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let mut p = parser(text)?;
    let poly = p.poly()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(poly)
}

pub fn parse_identity(text: &str) -> Result<Identity> {
    let mut p = parser(text)?;
    let lhs = p.poly()?;
    let kind = match p.peek() {
        Some(Tok::Eq) => Relation::Equation,
        Some(Tok::Leq) => Relation::Inequality,
        _ => return p.error("expected `=` or `<=`"),
    };
    p.pos += 1;
    let rhs = p.poly()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(Identity { lhs, rhs, kind })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Identity(Identity),
    Polynomial(Polynomial),
}

/// Parses an identity if the text contains `=` or `<=`, a polynomial otherwise.
pub fn parse(text: &str) -> Result<Parsed> {
    if lex(text)?.iter().any(|(_, t)| matches!(t, Tok::Eq | Tok::Leq)) {
        parse_identity(text).map(Parsed::Identity)
    } else {
        parse_polynomial(text).map(Parsed::Polynomial)
    }
}
