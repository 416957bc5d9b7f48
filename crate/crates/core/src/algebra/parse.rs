//! Recursive-descent parser for rational expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' exponent)?
//! exponent := '-'? integer | '(' '-'? integer ')'
//! atom   := integer | 'i' | symbol | '(' expr ')'
//! ```
//!
//! In the basic grammar the only symbol is `z`. The extended grammar also
//! accepts the names printed by `FieldElem`'s `Display` (`zh`, `alpha`, `K`,
//! `lambda`, `mu`, `nu`, `k`).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::field::FieldElem;
use super::gauss::GaussRat;
use super::mpoly::Sym;
use crate::error::{Error, Result};

/// Parses an expression in `z` and `i`.
pub fn parse_expr(src: &str) -> Result<FieldElem> {
    Parser::new(src, false).run()
}

/// Parses an expression that may use every symbol of the table.
pub fn parse_field(src: &str) -> Result<FieldElem> {
    Parser::new(src, true).run()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    extended: bool,
    lex_err: Option<Error>,
}

impl Parser {
    fn new(src: &str, extended: bool) -> Self {
        let mut toks = Vec::new();
        let mut lex_err = None;
        let chars: Vec<char> = src.chars().collect();
        let (mut line, mut col) = (1usize, 1usize);
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c == '\n' {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            if c.is_whitespace() {
                col += 1;
                i += 1;
                continue;
            }
            let (l0, c0) = (line, col);
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Int(s.parse().expect("digits")), l0, c0));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Ident(s), l0, c0));
            } else if "+-*/^()".contains(c) {
                toks.push((Tok::Op(c), l0, c0));
                i += 1;
                col += 1;
            } else {
                lex_err = Some(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character '{}'", c),
                });
                break;
            }
        }
        toks.push((Tok::End, line, col));
        Parser {
            toks,
            pos: 0,
            extended,
            lex_err,
        }
    }

    fn run(mut self) -> Result<FieldElem> {
        if let Some(e) = self.lex_err.take() {
            return Err(e);
        }
        let v = self.expr()?;
        match self.peek() {
            Tok::End => Ok(v),
            t => Err(self.err(format!("unexpected {}", describe(t)))),
        }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: String) -> Error {
        let (_, line, col) = &self.toks[self.pos];
        Error::Parse {
            line: *line,
            col: *col,
            msg,
        }
    }

    fn expr(&mut self) -> Result<FieldElem> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Op('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldElem> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Op('/') => {
                    self.bump();
                    let d = self.unary()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero".into()));
                    }
                    acc = &acc / &d;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElem> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Op('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElem> {
        let base = self.atom()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let e = self.exponent()?;
            if e < 0 && base.is_zero() {
                return Err(self.err("negative power of zero".into()));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32> {
        let paren = matches!(self.peek(), Tok::Op('('));
        if paren {
            self.bump();
        }
        let neg = matches!(self.peek(), Tok::Op('-'));
        if neg {
            self.bump();
        }
        let n = match self.bump() {
            Tok::Int(n) => n,
            t => {
                self.pos -= 1;
                return Err(self.err(format!("expected integer exponent, found {}", describe(&t))));
            }
        };
        let n: i32 = i32::try_from(n)
            .ok()
            .filter(|v| *v <= 4096)
            .ok_or_else(|| self.err("exponent too large".into()))?;
        if paren {
            self.expect(')')?;
        }
        Ok(if neg { -n } else { n })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == &Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected '{}', found {}", c, describe(self.peek()))))
        }
    }

    fn atom(&mut self) -> Result<FieldElem> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(FieldElem::constant(GaussRat::from_rational(BigRational::from_integer(n))))
            }
            Tok::Ident(name) => {
                if name == "i" {
                    self.bump();
                    return Ok(FieldElem::constant(GaussRat::i()));
                }
                let sym = Sym::from_name(&name).filter(|s| self.extended || *s == Sym::Z);
                match sym {
                    Some(s) => {
                        self.bump();
                        Ok(FieldElem::var(s))
                    }
                    None => Err(self.err(format!("unknown symbol '{}'", name))),
                }
            }
            Tok::Op('(') => {
                self.bump();
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            t => Err(self.err(format!("expected a number, symbol or '(', found {}", describe(&t)))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {}", n),
        Tok::Ident(s) => format!("'{}'", s),
        Tok::Op(c) => format!("'{}'", c),
        Tok::End => "end of input".into(),
    }
}
