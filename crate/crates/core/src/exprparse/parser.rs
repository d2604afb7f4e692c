use num_bigint::BigInt;
use num_traits::Zero;

use super::lexer::{Token, TokenKind};
use super::{Env, ParseError, Pos};
use crate::ncalg::{Generator, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Symbol(Generator),
    Rational(Scalar),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Commutator(Box<Expr>, Box<Expr>),
    Exp { arg: Box<Expr>, degree: usize },
    Order { rule: String, arg: Box<Expr> },
    Derivative { direction: Box<Expr>, target: Generator, operand: Box<Expr> },
}

/// Largest truncation degree accepted by `exp(...; n)`.
pub const MAX_EXP_DEGREE: usize = 32;

struct Parser<'a> {
    tokens: &'a [Token],
    at: usize,
    env: &'a Env,
}

/// Parses a full token stream (as produced by `tokenize`) into one expression.
pub fn parse(tokens: &[Token], env: &Env) -> Result<Expr, ParseError> {
    if tokens.last().map(|t| &t.kind) != Some(&TokenKind::Eof) {
        return Err(ParseError::new(Pos { line: 1, col: 1 }, "token stream must end with end of input"));
    }
    let mut p = Parser { tokens, at: 0, env };
    let e = p.expr()?;
    p.expect(TokenKind::Eof)?;
    Ok(e)
}

fn node(kind: ExprKind, pos: Pos) -> Expr {
    Expr { kind, pos }
}

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.at];
        if t.kind != TokenKind::Eof {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if &self.peek().kind == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let t = self.peek();
        ParseError::new(t.pos, format!("expected {wanted}, found {}", t.kind))
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Pos, ParseError> {
        if self.peek().kind == kind {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&kind.to_string()))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let t = self.peek();
            let pos = t.pos;
            let add = match t.kind {
                TokenKind::Plus => true,
                TokenKind::Minus => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let kind = if add {
                ExprKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = node(kind, pos);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().kind == TokenKind::Star {
            let pos = self.bump().pos;
            let rhs = self.unary()?;
            lhs = node(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == TokenKind::Minus {
            let pos = self.bump().pos;
            let inner = self.unary()?;
            return Ok(node(ExprKind::Neg(Box::new(inner)), pos));
        }
        self.primary()
    }

    fn integer(&mut self) -> Result<(BigInt, Pos), ParseError> {
        let t = self.peek();
        if let TokenKind::Int(n) = &t.kind {
            let out = (n.clone(), t.pos);
            self.bump();
            Ok(out)
        } else {
            Err(self.unexpected("an integer"))
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Int(num) => {
                self.bump();
                let den = if self.eat(&TokenKind::Slash) {
                    let (d, dpos) = self.integer()?;
                    if d.is_zero() {
                        return Err(ParseError::new(dpos, "zero denominator"));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(node(ExprKind::Rational(Scalar::new(num, den)), t.pos))
            }
            TokenKind::Ident(name) => {
                if self.tokens.get(self.at + 1).map(|n| &n.kind) == Some(&TokenKind::LBracket) {
                    if !self.env.has_ordering(&name) {
                        return Err(ParseError::new(t.pos, format!("undeclared ordering `{name}`")));
                    }
                    self.bump();
                    self.bump();
                    let arg = self.expr()?;
                    self.expect(TokenKind::RBracket)?;
                    return Ok(node(ExprKind::Order { rule: name, arg: Box::new(arg) }, t.pos));
                }
                let g = self.generator()?;
                Ok(node(ExprKind::Symbol(g), t.pos))
            }
            TokenKind::LBracket => {
                self.bump();
                let a = self.expr()?;
                self.expect(TokenKind::Comma)?;
                let b = self.expr()?;
                self.expect(TokenKind::RBracket)?;
                Ok(node(ExprKind::Commutator(Box::new(a), Box::new(b)), t.pos))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Exp => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let arg = self.expr()?;
                if self.peek().kind != TokenKind::Semi {
                    return Err(ParseError::new(self.peek().pos, "exp requires a truncation degree: exp(expr; n)"));
                }
                self.bump();
                let (n, npos) = self.integer()?;
                let degree = usize::try_from(&n)
                    .ok()
                    .filter(|d| *d <= MAX_EXP_DEGREE)
                    .ok_or_else(|| ParseError::new(npos, format!("truncation degree must be at most {MAX_EXP_DEGREE}")))?;
                self.expect(TokenKind::RParen)?;
                Ok(node(ExprKind::Exp { arg: Box::new(arg), degree }, t.pos))
            }
            TokenKind::D => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let direction = self.expr()?;
                self.expect(TokenKind::Arrow)?;
                let target = self.generator()?;
                self.expect(TokenKind::RParen)?;
                self.expect(TokenKind::LParen)?;
                let operand = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(node(
                    ExprKind::Derivative { direction: Box::new(direction), target, operand: Box::new(operand) },
                    t.pos,
                ))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn generator(&mut self) -> Result<Generator, ParseError> {
        let t = self.peek().clone();
        let TokenKind::Ident(id) = t.kind else {
            return Err(self.unexpected("a generator"));
        };
        self.bump();
        let mut g = Generator::new(&id);
        if self.eat(&TokenKind::Hash) {
            let tag = match &self.peek().kind {
                TokenKind::Ident(s) => s.clone(),
                TokenKind::Int(n) => n.to_string(),
                _ => return Err(self.unexpected("a tag")),
            };
            self.bump();
            g = g.with_tag(Some(&tag));
        }
        if self.eat(&TokenKind::At) {
            let neg = self.eat(&TokenKind::Minus);
            let (n, npos) = self.integer()?;
            let n = if neg { -n } else { n };
            let time = i64::try_from(&n).map_err(|_| ParseError::new(npos, "time label out of range"))?;
            g = g.with_time(Some(time));
        }
        Ok(g)
    }
}
