//! Text syntax for operator expressions.
//!
//! ```text
//! expr      := term (('+' | '-') term)*
//! term      := unary ('*' unary)*
//! unary     := '-' unary | primary
//! primary   := INT ('/' INT)?
//!            | generator
//!            | IDENT '[' expr ']'                      ordering application
//!            | '[' expr ',' expr ']'                   commutator
//!            | '(' expr ')'
//!            | 'exp' '(' expr ';' INT ')'              truncated exponential
//!            | 'D' '(' expr '->' generator ')' '(' expr ')'   directional derivative
//! generator := IDENT ('#' (IDENT | INT))? ('@' '-'? INT)?
//! ```
//!
//! `exp` and `D` are reserved. Canonical polynomial output (`NcPoly`'s
//! `Display`) is valid input and parses back to the same polynomial.

mod lexer;
mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::{parse, Expr, ExprKind, MAX_EXP_DEGREE};

use crate::gotcore::directional_derivative;
use crate::ncalg::{exp_truncated, Generator, NcAlgError, NcPoly};
use crate::ordering::{MonomialOrdering, OrderingError, OrderingRule, WeightedOrdering};

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { pos, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {0}")]
    Syntax(#[from] ParseError),
    #[error("{pos}: unbound symbol `{symbol}`")]
    Unbound { pos: Pos, symbol: Generator },
    #[error("{pos}: undeclared ordering `{name}`")]
    UndeclaredOrdering { pos: Pos, name: String },
    #[error("{pos}: {source}")]
    Ordering { pos: Pos, source: OrderingError },
    #[error("{pos}: {source}")]
    Algebra { pos: Pos, source: NcAlgError },
}

impl ExprError {
    pub fn pos(&self) -> Pos {
        match self {
            ExprError::Syntax(e) => e.pos,
            ExprError::Unbound { pos, .. }
            | ExprError::UndeclaredOrdering { pos, .. }
            | ExprError::Ordering { pos, .. }
            | ExprError::Algebra { pos, .. } => *pos,
        }
    }
}

/// Declarations visible to expressions.
#[derive(Clone, Debug, Default)]
pub struct Env {
    orderings: BTreeMap<String, OrderingRule>,
    symbols: Option<BTreeSet<Generator>>,
}

impl Env {
    /// No orderings; every symbol is implicitly declared.
    pub fn new() -> Self {
        Env::default()
    }

    /// `T` (time), `Tbar` (anti-time), `Alpha`, `Nxy` (X left of Y) and `W` (Weyl).
    pub fn standard() -> Self {
        let mut env = Env::new();
        env.declare_ordering("T", OrderingRule::Monomial(MonomialOrdering::time()));
        env.declare_ordering("Tbar", OrderingRule::Monomial(MonomialOrdering::anti_time()));
        env.declare_ordering("Alpha", OrderingRule::Monomial(MonomialOrdering::alpha()));
        env.declare_ordering("Nxy", OrderingRule::Monomial(MonomialOrdering::nxy("X", "Y")));
        env.declare_ordering("W", OrderingRule::Weighted(WeightedOrdering::weyl()));
        env
    }

    pub fn declare_ordering(&mut self, name: &str, rule: OrderingRule) -> &mut Self {
        self.orderings.insert(name.to_string(), rule);
        self
    }

    /// Restricts symbols to an explicit set; anything else is unbound.
    pub fn declare_symbols<I: IntoIterator<Item = Generator>>(&mut self, symbols: I) -> &mut Self {
        self.symbols.get_or_insert_with(BTreeSet::new).extend(symbols);
        self
    }

    pub fn has_ordering(&self, name: &str) -> bool {
        self.orderings.contains_key(name)
    }

    pub fn ordering(&self, name: &str) -> Option<&OrderingRule> {
        self.orderings.get(name)
    }

    pub fn is_bound(&self, g: &Generator) -> bool {
        self.symbols.as_ref().is_none_or(|s| s.contains(g))
    }
}

pub fn parse_str(src: &str, env: &Env) -> Result<Expr, ParseError> {
    parse(&tokenize(src)?, env)
}

/// Evaluates an expression tree bottom-up into a canonical polynomial.
pub fn compile(ast: &Expr, env: &Env) -> Result<NcPoly, ExprError> {
    let pos = ast.pos;
    Ok(match &ast.kind {
        ExprKind::Symbol(g) => {
            if !env.is_bound(g) {
                return Err(ExprError::Unbound { pos, symbol: g.clone() });
            }
            NcPoly::generator(g.clone())
        }
        ExprKind::Rational(q) => NcPoly::constant(q.clone()),
        ExprKind::Neg(e) => -compile(e, env)?,
        ExprKind::Add(a, b) => &compile(a, env)? + &compile(b, env)?,
        ExprKind::Sub(a, b) => &compile(a, env)? - &compile(b, env)?,
        ExprKind::Mul(a, b) => &compile(a, env)? * &compile(b, env)?,
        ExprKind::Commutator(a, b) => compile(a, env)?.commutator(&compile(b, env)?),
        ExprKind::Exp { arg, degree } => exp_truncated(&compile(arg, env)?, *degree)
            .map_err(|source| ExprError::Algebra { pos, source })?
            .total(),
        ExprKind::Order { rule, arg } => {
            let o = env.ordering(rule).ok_or_else(|| ExprError::UndeclaredOrdering { pos, name: rule.clone() })?;
            o.apply_poly(&compile(arg, env)?).map_err(|source| ExprError::Ordering { pos, source })?
        }
        ExprKind::Derivative { direction, target, operand } => {
            if !env.is_bound(target) {
                return Err(ExprError::Unbound { pos, symbol: target.clone() });
            }
            directional_derivative(&compile(direction, env)?, target, &compile(operand, env)?)
        }
    })
}

/// Tokenize, parse and compile in one step.
pub fn eval_str(src: &str, env: &Env) -> Result<NcPoly, ExprError> {
    compile(&parse_str(src, env)?, env)
}
