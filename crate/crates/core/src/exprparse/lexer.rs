use std::fmt;

use num_bigint::BigInt;

use super::{ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(BigInt),
    Slash,
    Plus,
    Minus,
    Star,
    LBracket,
    RBracket,
    Comma,
    LParen,
    RParen,
    Semi,
    At,
    Hash,
    Arrow,
    Exp,
    D,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Int(n) => write!(f, "integer `{n}`"),
            TokenKind::Slash => f.write_str("`/`"),
            TokenKind::Plus => f.write_str("`+`"),
            TokenKind::Minus => f.write_str("`-`"),
            TokenKind::Star => f.write_str("`*`"),
            TokenKind::LBracket => f.write_str("`[`"),
            TokenKind::RBracket => f.write_str("`]`"),
            TokenKind::Comma => f.write_str("`,`"),
            TokenKind::LParen => f.write_str("`(`"),
            TokenKind::RParen => f.write_str("`)`"),
            TokenKind::Semi => f.write_str("`;`"),
            TokenKind::At => f.write_str("`@`"),
            TokenKind::Hash => f.write_str("`#`"),
            TokenKind::Arrow => f.write_str("`->`"),
            TokenKind::Exp => f.write_str("keyword `exp`"),
            TokenKind::D => f.write_str("keyword `D`"),
            TokenKind::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

/// Splits `src` into tokens, ending with a single `Eof`.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&(start, c)) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        let kind = if c.is_ascii_alphabetic() {
            let mut end = start;
            while let Some(&(i, ch)) = chars.peek() {
                if ch.is_ascii_alphanumeric() || ch == '_' {
                    end = i + ch.len_utf8();
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            match &src[start..end] {
                "exp" => TokenKind::Exp,
                "D" => TokenKind::D,
                s => TokenKind::Ident(s.to_string()),
            }
        } else if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, ch)) = chars.peek() {
                if ch.is_ascii_digit() {
                    end = i + 1;
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            TokenKind::Int(src[start..end].parse().expect("ascii digits"))
        } else {
            chars.next();
            col += 1;
            match c {
                '/' => TokenKind::Slash,
                '+' => TokenKind::Plus,
                '*' => TokenKind::Star,
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                ',' => TokenKind::Comma,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                ';' => TokenKind::Semi,
                '@' => TokenKind::At,
                '#' => TokenKind::Hash,
                '-' => {
                    if matches!(chars.peek(), Some(&(_, '>'))) {
                        chars.next();
                        col += 1;
                        TokenKind::Arrow
                    } else {
                        TokenKind::Minus
                    }
                }
                other => return Err(ParseError::new(pos, format!("illegal character `{other}`"))),
            }
        };
        out.push(Token { kind, pos });
    }
    out.push(Token { kind: TokenKind::Eof, pos: Pos { line, col } });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        tokenize(src).unwrap().into_iter().map(|t| t.kind).collect()
    }

    fn id(s: &str) -> TokenKind {
        TokenKind::Ident(s.into())
    }

    #[test]
    fn commutator_tokens() {
        use TokenKind::*;
        assert_eq!(kinds("[X,Y]"), vec![LBracket, id("X"), Comma, id("Y"), RBracket, Eof]);
    }

    #[test]
    fn rational_product_tokens() {
        use TokenKind::*;
        assert_eq!(
            kinds("1/2*X*Y"),
            vec![Int(1.into()), Slash, Int(2.into()), Star, id("X"), Star, id("Y"), Eof]
        );
    }

    #[test]
    fn keywords_and_arrow() {
        use TokenKind::*;
        assert_eq!(kinds("exp(X;4)"), vec![Exp, LParen, id("X"), Semi, Int(4.into()), RParen, Eof]);
        assert_eq!(kinds("D(a->b)"), vec![D, LParen, id("a"), Arrow, id("b"), RParen, Eof]);
        assert_eq!(kinds("x - y"), vec![id("x"), Minus, id("y"), Eof]);
        assert_eq!(kinds("Dx expo A@3 x#o1"), vec![
            id("Dx"), id("expo"), id("A"), At, Int(3.into()), id("x"), Hash, id("o1"), Eof
        ]);
    }

    #[test]
    fn positions_are_one_based() {
        let toks = tokenize("X +\n  Y").unwrap();
        assert_eq!(toks[0].pos, Pos { line: 1, col: 1 });
        assert_eq!(toks[1].pos, Pos { line: 1, col: 3 });
        assert_eq!(toks[2].pos, Pos { line: 2, col: 3 });
    }

    #[test]
    fn illegal_character() {
        let err = tokenize("X +\n Y $ Z").unwrap_err();
        assert_eq!(err.pos, Pos { line: 2, col: 4 });
        assert!(err.message.contains('$'));
    }
}
