//! Polynomial text grammar.
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := factor ('*'? factor)*
//! factor  := primary ('^' integer)?
//! primary := integer | identifier | '(' expr ')'
//! ```
//!
//! Multiplication may be implicit (`3y`, `2 x^2`). Columns in diagnostics
//! are 1-based character positions.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Num(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let t = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => {
                return Err(Error::Parse { column: col, message: format!("unexpected character `{c}`") })
            }
        };
        out.push((t, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [String],
    end_col: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end_col)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { column: self.col(), message: message.into() })
    }

    fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut neg = false;
        match self.peek() {
            Some(Tok::Minus) => {
                neg = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = self.term()?;
        if neg {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc + self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc - self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::Parse { column: self.col(), message: "exponent too large".into() })?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.nvars(), n))
            }
            Some(Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.nvars(), i))
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {}", describe(&t))),
            None => self.err("unexpected end of input"),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("`{n}`"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
    }
}

/// Parses `src` as a polynomial in the variables `vars` (integer coefficients).
pub fn parse_polynomial(src: &str, vars: &[String]) -> Result<Polynomial> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0, vars, end_col: src.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        let t = p.toks[p.pos].0.clone();
        return p.err(format!("unexpected token {}", describe(&t)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn implicit_multiplication_and_powers() {
        let vars = v(&["x", "y"]);
        let p = parse_polynomial("3y - x^2*y + 2 x", &vars).unwrap();
        assert_eq!(p.render(&vars), "-x^2*y + 2*x + 3*y");
        let q = parse_polynomial("(x+y)^2", &vars).unwrap();
        assert_eq!(q.render(&vars), "x^2 + 2*x*y + y^2");
    }

    #[test]
    fn double_caret_reports_second_caret() {
        let err = parse_polynomial("x^^2", &v(&["x"])).unwrap_err();
        assert_eq!(err, Error::Parse { column: 3, message: "expected a nonnegative integer exponent".into() });
    }

    #[test]
    fn unknown_variable() {
        assert!(matches!(parse_polynomial("z + 1", &v(&["x"])), Err(Error::Parse { column: 1, .. })));
        assert!(parse_polynomial("", &v(&["x"])).is_err());
        assert!(parse_polynomial("x)", &v(&["x"])).is_err());
    }

    #[test]
    fn multi_letter_identifiers() {
        let vars = v(&["x0", "x1"]);
        let p = parse_polynomial("x1^2 - x0", &vars).unwrap();
        assert_eq!(p.render(&vars), "x1^2 - x0");
    }
}
