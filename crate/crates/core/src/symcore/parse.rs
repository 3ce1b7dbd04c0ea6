//! Lexer and recursive-descent parser for the canonical text form.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | factor
//! factor := base ('^' ['-'] int)?
//! base   := number | var | jet | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`.

use super::expr::{Expr, Func};
use super::scalar::Scalar;
use super::symbols::{JetSymbol, SymbolTable, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Scalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let lit = &text[start..i];
                let value = Scalar::parse_decimal(lit)
                    .ok_or_else(|| syntax(start, format!("malformed number `{lit}`")))?;
                out.push((Tok::Num(value), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(syntax(start, format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    table: &'a SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(syntax(self.offset(), format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Add(terms)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = acc * self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    acc = acc.div(self.unary()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let parenthesized = *self.peek() == Tok::LParen;
        if parenthesized {
            self.bump();
        }
        let negative = *self.peek() == Tok::Minus;
        if negative {
            self.bump();
        }
        let Tok::Num(k) = self.bump() else {
            return Err(syntax(at, "expected an integer exponent"));
        };
        let k = k
            .to_i64()
            .ok_or_else(|| syntax(at, "exponent must be an integer"))?;
        if parenthesized {
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(base.pow(if negative { -k } else { k }))
    }

    fn base(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.bump() {
            Tok::Num(c) => Ok(Expr::Num(c)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(&name, at),
            Tok::End => Err(syntax(at, "unexpected end of input")),
            t => Err(syntax(at, format!("unexpected token {t:?}"))),
        }
    }

    fn identifier(&mut self, name: &str, at: usize) -> Result<Expr> {
        if let Some(f) = Func::from_name(name) {
            self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
            let arg = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Expr::func(f, arg));
        }
        if let Some(v) = Var::from_name(name) {
            return Ok(Expr::Var(v));
        }
        let (fname, ders) = match name.split_once('_') {
            Some((f, d)) => (f, Some(d)),
            None => (name, None),
        };
        let sym = self
            .table
            .get(fname)
            .ok_or_else(|| Error::UnknownIdentifier(fname.to_string()))?;
        let vars = match ders {
            None => Vec::new(),
            Some(seq) => split_varseq(seq).ok_or_else(|| {
                syntax(
                    at + fname.len() + 1,
                    format!("`{seq}` is not a sequence of variables"),
                )
            })?,
        };
        Ok(Expr::Jet(JetSymbol::new(sym.clone(), &vars)?))
    }
}

/// Splits e.g. `p1p1x2` into variables.
fn split_varseq(mut seq: &str) -> Option<Vec<Var>> {
    if seq.is_empty() {
        return None;
    }
    let mut out = Vec::new();
    while !seq.is_empty() {
        let v = Var::ALL.into_iter().find(|v| seq.starts_with(v.name()))?;
        out.push(v);
        seq = &seq[v.name().len()..];
    }
    Some(out)
}

/// Parses with the default symbol table (`u`, `v`, `F1`, `F2`).
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, &SymbolTable::default())
}

pub fn parse_with(text: &str, table: &SymbolTable) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        table,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.offset(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::symbols::FunctionSymbol;

    #[test]
    fn jets_and_atoms() {
        let e = parse("u_p1p2 + sin(lam)^2").unwrap();
        let expected = Expr::u(&[Var::P1, Var::P2]) + Expr::sin(Expr::var(Var::Lam)).pow(2);
        assert_eq!(e, expected);
    }

    #[test]
    fn precedence() {
        let e = parse("-x1^2").unwrap();
        assert_eq!(e, -Expr::var(Var::X1).pow(2));
        let e = parse("1/2*p1").unwrap();
        assert_eq!(e, Expr::int(1).div(Expr::int(2)) * Expr::var(Var::P1));
        assert_eq!(parse("x1^-2").unwrap(), Expr::var(Var::X1).pow(-2));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse("x1 + * 2"),
            Err(Error::Syntax {
                offset: 5,
                message: "unexpected token Star".into()
            })
        );
        assert!(matches!(parse("u_t"), Err(Error::Dependency { .. })));
        assert!(matches!(parse("w_p1"), Err(Error::UnknownIdentifier(_))));
        assert!(matches!(parse("u_p3"), Err(Error::Syntax { offset: 2, .. })));
        assert!(matches!(parse("sin x1"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn declared_symbols() {
        let mut table = SymbolTable::default();
        table.declare("psi", &[Var::Lam]).unwrap();
        let e = parse_with("psi_lamlam", &table).unwrap();
        let psi = FunctionSymbol::new("psi", super::super::symbols::VarSet::of(&[Var::Lam])).unwrap();
        assert_eq!(e, Expr::jet(&psi, &[Var::Lam, Var::Lam]));
        assert!(parse("psi").is_err());
    }

    #[test]
    fn decimals() {
        assert_eq!(parse("0.25").unwrap(), Expr::Num(Scalar::ratio(1, 4)));
    }
}
