//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := '-' factor | power
//! power  := atom ('^' number)?
//! atom   := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! The exponent may carry a leading `-` so printed trees with negative
//! constant exponents re-parse.

use super::{BinaryOp, Expr, UnaryOp};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Token, usize)>> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, at) = lx.next_token()?;
            let done = tok == Token::End;
            out.push((tok, at));
            if done {
                return Ok(out);
            }
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next_token(&mut self) -> Result<(Token, usize)> {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let start = self.pos;
        let Some(c) = self.peek_char() else {
            return Ok((Token::End, start));
        };
        if c.is_ascii_digit() || c == '.' {
            return self.number(start);
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = self.src[start..]
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(self.src.len() - start);
            self.pos += len;
            return Ok((Token::Ident(self.src[start..self.pos].to_string()), start));
        }
        if "+-*/^(),".contains(c) {
            self.pos += 1;
            return Ok((Token::Op(c), start));
        }
        Err(Error::Syntax {
            position: start,
            expected: format!("number, identifier or operator (found `{c}`)"),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Token, usize)> {
        let bytes = self.src.as_bytes();
        let mut i = start;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < bytes.len() && bytes[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        let mut n = digits(&mut i);
        if i < bytes.len() && bytes[i] == b'.' {
            i += 1;
            n += digits(&mut i);
        }
        if n == 0 {
            return Err(Error::Syntax {
                position: start,
                expected: "digits".into(),
            });
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) > 0 {
                i = j;
            }
        }
        self.pos = i;
        let text = &self.src[start..i];
        text.parse::<f64>()
            .map(|v| (Token::Number(v), start))
            .map_err(|_| Error::Syntax {
                position: start,
                expected: "a decimal number".into(),
            })
    }
}

struct Parser<'a> {
    tokens: Vec<(Token, usize)>,
    at: usize,
    coords: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.at].0
    }

    fn position(&self) -> usize {
        self.tokens[self.at].1
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].0.clone();
        if t != Token::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if *self.peek() == Token::Op(op) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.position(),
            expected: expected.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Op('+') => BinaryOp::Add,
                Token::Op('-') => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Token::Op('*') => BinaryOp::Mul,
                Token::Op('/') => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            // `-<number>` not followed by `^` is a negative literal, matching
            // how negative constants print
            if let (Token::Number(v), next) = (self.peek().clone(), &self.tokens[self.at + 1].0) {
                if *next != Token::Op('^') {
                    self.bump();
                    return Ok(Expr::Constant(-v));
                }
            }
            return Ok(Expr::unary(UnaryOp::Neg, self.factor()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        match self.bump() {
            Token::Number(k) => Ok(Expr::pow(base, if negative { -k } else { k })),
            _ => {
                self.at -= 1;
                self.syntax("a numeric exponent")
            }
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.position();
        match self.bump() {
            Token::Number(v) => Ok(Expr::Constant(v)),
            Token::Op('(') => {
                let inner = self.expr()?;
                if !self.eat(')') {
                    return self.syntax("`)`");
                }
                Ok(inner)
            }
            Token::Ident(name) => self.ident(name, pos),
            Token::End => {
                self.at = self.tokens.len() - 1;
                self.syntax("an operand")
            }
            Token::Op(_) => {
                self.at -= 1;
                self.syntax("an operand")
            }
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<Expr> {
        let call = *self.peek() == Token::Op('(');
        if let Some(index) = self.coords.iter().position(|c| *c == name) {
            if call {
                return Err(Error::Arity {
                    name,
                    position: pos,
                    reason: "is a coordinate and takes no arguments".into(),
                });
            }
            return Ok(Expr::coord(index, name));
        }
        let Some(op) = UnaryOp::from_name(&name) else {
            return Err(Error::UnknownSymbol(name));
        };
        if !call {
            return Err(Error::Arity {
                name,
                position: pos,
                reason: "requires exactly one parenthesized argument".into(),
            });
        }
        self.bump();
        if *self.peek() == Token::Op(')') {
            return Err(Error::Arity {
                name,
                position: pos,
                reason: "called with no arguments".into(),
            });
        }
        let arg = self.expr()?;
        if *self.peek() == Token::Op(',') {
            return Err(Error::Arity {
                name,
                position: pos,
                reason: "called with more than one argument".into(),
            });
        }
        if !self.eat(')') {
            return self.syntax("`)`");
        }
        Ok(Expr::unary(op, arg))
    }
}

/// Parses `text` against the coordinate list `coords`; every identifier
/// must be a coordinate or one of the recognized functions.
pub fn parse_expr(text: &str, coords: &[&str]) -> Result<Expr> {
    if coords.is_empty() {
        return Err(Error::Validation {
            name: "coords".into(),
            reason: "coordinate list is empty".into(),
        });
    }
    for (i, c) in coords.iter().enumerate() {
        if coords[..i].contains(c) {
            return Err(Error::NameClash(c.to_string()));
        }
    }
    let tokens = Lexer::tokens(text)?;
    let mut p = Parser {
        tokens,
        at: 0,
        coords,
    };
    let e = p.expr()?;
    match p.peek() {
        Token::End => Ok(e),
        Token::Op(')') => p.syntax("end of input (unbalanced `)`)"),
        Token::Op('^') => p.syntax("end of input (chained `^` needs parentheses)"),
        _ => p.syntax("an operator or end of input"),
    }
}
