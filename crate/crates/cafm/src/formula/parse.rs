//! Recursive-descent parser for the formula concrete syntax.
//!
//! Operators: `!` (not), `&` (and), `|` (or), `->` (implies), with
//! precedence `!` > `&` > `|` > `->`. `&` and `|` associate to the left,
//! `->` to the right. Parentheses override.

use std::fmt;

use thiserror::Error;

use super::{Formula, VarName};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::True => write!(f, "`true`"),
            Tok::False => write!(f, "`false`"),
            Tok::Not => write!(f, "`!`"),
            Tok::And => write!(f, "`&`"),
            Tok::Or => write!(f, "`|`"),
            Tok::Implies => write!(f, "`->`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = text.chars().peekable();
    loop {
        let (tl, tc) = (line, col);
        let c = match chars.next() {
            None => {
                out.push(Token { tok: Tok::Eof, line, col });
                return Ok(out);
            }
            Some(c) => c,
        };
        let mut advance = |n: u32| col += n;
        let tok = match c {
            '\n' => {
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1);
                continue;
            }
            '(' => {
                advance(1);
                Tok::LParen
            }
            ')' => {
                advance(1);
                Tok::RParen
            }
            '!' => {
                advance(1);
                Tok::Not
            }
            '&' => {
                advance(1);
                Tok::And
            }
            '|' => {
                advance(1);
                Tok::Or
            }
            '-' => match chars.peek() {
                Some('>') => {
                    chars.next();
                    advance(2);
                    Tok::Implies
                }
                _ => {
                    return Err(ParseError {
                        line: tl,
                        col: tc,
                        message: "expected `->` after `-`".to_string(),
                    })
                }
            },
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut ident = String::new();
                ident.push(c);
                while let Some(&n) = chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        ident.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                advance(ident.len() as u32);
                match ident.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    _ => Tok::Ident(ident),
                }
            }
            other => {
                return Err(ParseError {
                    line: tl,
                    col: tc,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Token { tok, line: tl, col: tc });
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &str) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            message: format!("expected {expected}, found {}", t.tok),
        }
    }

    // implies := or ('->' implies)?    right-associative
    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.peek().tok == Tok::Implies {
            self.bump();
            let rhs = self.implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek().tok == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.peek().tok == Tok::Not {
            self.bump();
            Ok(Formula::not(self.unary()?))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(name) => {
                self.bump();
                // Lexer guarantees the identifier pattern and filters reserved words.
                Ok(Formula::Var(VarName::new(name).expect("lexed identifier")))
            }
            Tok::True => {
                self.bump();
                Ok(Formula::Const(true))
            }
            Tok::False => {
                self.bump();
                Ok(Formula::Const(false))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implies()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("a variable, `true`, `false`, `!` or `(`")),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = lex(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let f = p.implies()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::super::Formula;

    fn v(s: &str) -> Formula {
        Formula::var(s)
    }

    #[test]
    fn single_identifier() {
        assert_eq!(Formula::parse("eCall").unwrap(), v("eCall"));
    }

    #[test]
    fn precedence_and_grouping() {
        assert_eq!(
            Formula::parse("a & (b | !c)").unwrap(),
            Formula::and(v("a"), Formula::or(v("b"), Formula::not(v("c"))))
        );
    }

    #[test]
    fn implies_is_right_associative() {
        assert_eq!(
            Formula::parse("a -> b -> c").unwrap(),
            Formula::implies(v("a"), Formula::implies(v("b"), v("c")))
        );
    }

    #[test]
    fn and_or_left_associative() {
        assert_eq!(
            Formula::parse("a & b & c").unwrap(),
            Formula::and(Formula::and(v("a"), v("b")), v("c"))
        );
        assert_eq!(
            Formula::parse("a | b | c").unwrap(),
            Formula::or(Formula::or(v("a"), v("b")), v("c"))
        );
    }

    #[test]
    fn not_binds_tighter_than_and() {
        assert_eq!(
            Formula::parse("!a & b").unwrap(),
            Formula::and(Formula::not(v("a")), v("b"))
        );
    }

    #[test]
    fn and_binds_tighter_than_implies() {
        assert_eq!(
            Formula::parse("a & b -> c").unwrap(),
            Formula::implies(Formula::and(v("a"), v("b")), v("c"))
        );
    }

    #[test]
    fn constants() {
        assert_eq!(Formula::parse("true").unwrap(), Formula::Const(true));
        assert_eq!(
            Formula::parse("false | x").unwrap(),
            Formula::or(Formula::Const(false), v("x"))
        );
    }

    #[test]
    fn error_reports_position() {
        let err = Formula::parse("a &\n  @b").unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.col, 3);
        assert!(err.to_string().contains("unexpected character"));
    }

    #[test]
    fn error_on_dangling_operator() {
        let err = Formula::parse("a &").unwrap_err();
        assert!(err.message.contains("expected a variable"));
    }

    #[test]
    fn error_on_trailing_garbage() {
        let err = Formula::parse("a b").unwrap_err();
        assert!(err.message.contains("end of input"));
        assert_eq!(err.col, 3);
    }

    #[test]
    fn lone_dash_rejected() {
        assert!(Formula::parse("a - b").is_err());
    }
}
