//! Text form of polynomials: `m^8*l - 2/3*x*y^-1 + (x - 1)^2`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::registry::Registry;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().map(|b| b.1).collect();
            out.push((pos, Tok::Num(s.parse().expect("digits"))));
        } else if is_ident_start(c) {
            let start = i;
            while i < bytes.len() && is_ident_char(bytes[i].1) {
                i += 1;
            }
            out.push((
                pos,
                Tok::Ident(bytes[start..i].iter().map(|b| b.1).collect()),
            ));
        } else if "+-*/^()".contains(c) {
            out.push((pos, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    reg: &'a Arc<Registry>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Polynomial> {
        let mut acc = if self.eat('-') {
            -&self.product()?
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                match d.invert_term() {
                    Some(inv) => acc = &acc * &inv,
                    None => return self.err("division only by a nonzero monomial term"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(n)) => {
                let n: i32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                self.at += 1;
                n
            }
            _ => return self.err("expected integer exponent"),
        };
        if paren && !self.eat(')') {
            return self.err("expected `)`");
        }
        if neg {
            match base.invert_term() {
                Some(inv) => Ok(inv.pow(e as u32)),
                None => self.err("negative power of a non-monomial"),
            }
        } else {
            Ok(base.pow(e as u32))
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(Polynomial::constant(self.reg, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                let v = match self.reg.index(&name) {
                    Some(v) => v,
                    None => return self.err(format!("unknown variable `{name}`")),
                };
                self.at += 1;
                Ok(Polynomial::monomial(
                    self.reg,
                    Monomial::var(self.reg.len(), v),
                ))
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(Tok::Op('-')) => {
                self.at += 1;
                Ok(-&self.power()?)
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

pub fn parse(text: &str, reg: &Arc<Registry>) -> Result<Polynomial> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        end: text.len(),
        reg,
    };
    let r = p.sum()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(r)
}

/// Variable names occurring in `text`, in order of first appearance.
pub fn identifiers(text: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = Vec::new();
    for (_, t) in lex(text)? {
        if let Tok::Ident(s) = t {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn parses_primed_names_and_rationals() {
        let reg = Registry::new(["m'", "l'", "x", "y"]).unwrap();
        let p = parse("-m'^2*l'*y*x^-1", &reg).unwrap();
        let (m, c) = p.as_term().unwrap();
        assert_eq!(m.exponents(), &[2, 1, -1, 1]);
        assert_eq!(*c, -BigRational::one());
        let q = parse("(x - 1)^2/x + 3/4", &reg).unwrap();
        assert_eq!(q.to_string(), "x - 5/4 + x^-1");
    }

    #[test]
    fn reports_errors() {
        let reg = Registry::new(["x"]).unwrap();
        assert!(matches!(
            parse("x + z", &reg),
            Err(Error::Parse { pos: 4, .. })
        ));
        assert!(parse("x / (x + 1)", &reg).is_err());
        assert!(parse("x +", &reg).is_err());
        assert!(parse("x $ 2", &reg).is_err());
    }

    #[test]
    fn identifier_scan() {
        assert_eq!(
            identifiers("x*y^2 - m'*x").unwrap(),
            vec!["x".to_string(), "y".to_string(), "m'".to_string()]
        );
    }
}
