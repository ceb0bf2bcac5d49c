//! Hand-rolled lexer for the program grammar. `#` comments run to end of
//! line; input is newline-insensitive otherwise.

use super::ast::Span;
use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    At,
    Assign,
    EqEq,
    NotEq,
    Bang,
    AndAnd,
    OrOr,
    Eof,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Nat(n) => write!(f, "`{n}`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::At => write!(f, "`@`"),
            Tok::Assign => write!(f, "`=`"),
            Tok::EqEq => write!(f, "`==`"),
            Tok::NotEq => write!(f, "`!=`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::AndAnd => write!(f, "`&&`"),
            Tok::OrOr => write!(f, "`||`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

pub struct Lexed {
    pub toks: Vec<(Tok, Span)>,
}

pub fn lex(src: &str) -> Result<Lexed, SyntaxError> {
    let mut toks = Vec::new();
    let mut line = 1u32;
    let mut col = 1u32;
    let mut chars = src.chars().peekable();
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }
    loop {
        let span = Span { line, col };
        let Some(&c) = chars.peek() else {
            toks.push((Tok::Eof, span));
            return Ok(Lexed { toks });
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(s), span));
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&c) = chars.peek() {
                    if let Some(d) = c.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(d as u64))
                            .ok_or_else(|| SyntaxError::at(span, "number literal overflows"))?;
                        bump!();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Nat(n), span));
            }
            '{' => {
                bump!();
                toks.push((Tok::LBrace, span));
            }
            '}' => {
                bump!();
                toks.push((Tok::RBrace, span));
            }
            '[' => {
                bump!();
                toks.push((Tok::LBracket, span));
            }
            ']' => {
                bump!();
                toks.push((Tok::RBracket, span));
            }
            '(' => {
                bump!();
                toks.push((Tok::LParen, span));
            }
            ')' => {
                bump!();
                toks.push((Tok::RParen, span));
            }
            ',' => {
                bump!();
                toks.push((Tok::Comma, span));
            }
            ';' => {
                bump!();
                toks.push((Tok::Semi, span));
            }
            ':' => {
                bump!();
                toks.push((Tok::Colon, span));
            }
            '@' => {
                bump!();
                toks.push((Tok::At, span));
            }
            '=' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    toks.push((Tok::EqEq, span));
                } else {
                    toks.push((Tok::Assign, span));
                }
            }
            '!' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    toks.push((Tok::NotEq, span));
                } else {
                    toks.push((Tok::Bang, span));
                }
            }
            '&' => {
                bump!();
                if chars.peek() == Some(&'&') {
                    bump!();
                    toks.push((Tok::AndAnd, span));
                } else {
                    return Err(SyntaxError::at(span, "expected `&&`"));
                }
            }
            '|' => {
                bump!();
                if chars.peek() == Some(&'|') {
                    bump!();
                    toks.push((Tok::OrOr, span));
                } else {
                    return Err(SyntaxError::at(span, "expected `||`"));
                }
            }
            other => {
                return Err(SyntaxError::at(span, format!("unexpected character {other:?}")));
            }
        }
    }
}
