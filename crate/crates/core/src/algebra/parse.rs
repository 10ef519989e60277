//! Expression grammar:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' exponent)?
//! exponent:= '-'? INT | '(' '-'? INT ')'
//! atom    := INT | IDENT | 'conj' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `i` is the imaginary unit when the symbol table allows it. Division is
//! accepted whenever the divisor is an even expression in base variables
//! (or a parameter monomial).

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::rational::RationalExpr;
use super::scalar::{Rational, Scalar};
use super::var::Var;
use crate::error::{Error, Result};

pub trait SymbolTable {
    fn resolve(&self, name: &str) -> Option<Var>;

    fn complex_mode(&self) -> bool {
        false
    }
}

/// A plain name → variable table with optional aliases.
#[derive(Clone, Debug, Default)]
pub struct Symbols {
    vars: BTreeMap<String, Var>,
    complex: bool,
}

impl Symbols {
    pub fn new(complex: bool) -> Self {
        Symbols {
            vars: BTreeMap::new(),
            complex,
        }
    }

    pub fn from_vars<'a>(vars: impl IntoIterator<Item = &'a Var>, complex: bool) -> Self {
        let mut s = Self::new(complex);
        for v in vars {
            s.insert(v.clone());
        }
        s
    }

    pub fn insert(&mut self, v: Var) {
        self.vars.insert(v.name().to_string(), v);
    }

    pub fn alias(&mut self, name: &str, v: Var) {
        self.vars.insert(name.to_string(), v);
    }
}

impl SymbolTable for Symbols {
    fn resolve(&self, name: &str) -> Option<Var> {
        self.vars.get(name).cloned()
    }

    fn complex_mode(&self) -> bool {
        self.complex
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1usize, 1usize);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            k += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().collect();
            col += k - start;
            toks.push((Tok::Int(s.parse().expect("digits")), l0, c0));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            col += k - start;
            toks.push((Tok::Ident(chars[start..k].iter().collect()), l0, c0));
            continue;
        }
        if "+-*/^()".contains(c) {
            toks.push((Tok::Sym(c), l0, c0));
            col += 1;
            k += 1;
            continue;
        }
        return Err(Error::Parse {
            line: l0,
            column: c0,
            message: format!("unexpected character `{c}`"),
        });
    }
    toks.push((Tok::End, line, col));
    Ok(Lexer { toks, pos: 0 })
}

struct Parser<'a, S: SymbolTable> {
    lx: Lexer,
    syms: &'a S,
}

impl<S: SymbolTable> Parser<'_, S> {
    fn peek(&self) -> &Tok {
        &self.lx.toks[self.lx.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.lx.toks[self.lx.pos].0.clone();
        if self.lx.pos + 1 < self.lx.toks.len() {
            self.lx.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let (_, line, column) = self.lx.toks[self.lx.pos];
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    /// Attach the current position to an algebraic error.
    fn at<T>(&self, r: Result<T>) -> Result<T> {
        match r {
            Ok(v) => Ok(v),
            Err(e @ Error::Parse { .. }) => Err(e),
            Err(e) => self.err(e.to_string()),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<RationalExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.at(acc.checked_add(&rhs))?;
                }
                Tok::Sym('-') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.at(acc.checked_sub(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.at(acc.checked_mul(&rhs))?;
                }
                Tok::Sym('/') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.at(acc.checked_div(&rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalExpr> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalExpr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let paren = *self.peek() == Tok::Sym('(');
        if paren {
            self.bump();
        }
        let neg = *self.peek() == Tok::Sym('-');
        if neg {
            self.bump();
        }
        let e = match self.bump() {
            Tok::Int(n) => match i32::try_from(n) {
                Ok(e) => e,
                Err(_) => return self.err("exponent too large"),
            },
            _ => return self.err("exponent must be an integer"),
        };
        if paren {
            self.expect(')')?;
        }
        let e = if neg { -e } else { e };
        self.at(base.pow(e))
    }

    fn atom(&mut self) -> Result<RationalExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(RationalExpr::constant(Scalar::from(Rational::from_integer(n))))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if name == "conj" && self.lx.toks.get(self.lx.pos + 1).map(|t| &t.0) == Some(&Tok::Sym('(')) {
                    if !self.syms.complex_mode() {
                        return self.err("conj is only available in complex mode");
                    }
                    self.bump();
                    self.bump();
                    let e = self.expr()?;
                    self.expect(')')?;
                    return Ok(e.conjugate());
                }
                if name == "i" && self.syms.complex_mode() {
                    self.bump();
                    return Ok(RationalExpr::constant(Scalar::i()));
                }
                match self.syms.resolve(&name) {
                    Some(v) => {
                        self.bump();
                        Ok(RationalExpr::var(&v))
                    }
                    None => self.err(format!("unknown variable `{name}`")),
                }
            }
            Tok::End => self.err("unexpected end of expression"),
            Tok::Sym(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

pub fn parse_expr(src: &str, syms: &impl SymbolTable) -> Result<RationalExpr> {
    let mut p = Parser { lx: lex(src)?, syms };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(e)
}
