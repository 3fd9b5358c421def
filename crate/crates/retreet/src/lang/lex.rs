//! Tokenizer for `.rtt` sources. `//` comments run to end of line.

use super::ast::Span;
use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    KwIf,
    KwElse,
    KwReturn,
    KwNil,
    KwTrue,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Semi,
    Assign,
    EqEq,
    BangEq,
    AndAnd,
    ParSep, // ||
    Bang,
    Plus,
    Minus,
    Lt,
    Gt,
    Le,
    Ge,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn line_col(src: &str, offset: u32) -> (usize, usize) {
    let mut line = 1usize;
    let mut col = 1usize;
    for (i, ch) in src.char_indices() {
        if i as u32 >= offset {
            break;
        }
        if ch == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    (line, col)
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let lo = i as u32;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            '(' => push(&mut toks, Tok::LParen, lo, &mut i, 1),
            ')' => push(&mut toks, Tok::RParen, lo, &mut i, 1),
            '{' => push(&mut toks, Tok::LBrace, lo, &mut i, 1),
            '}' => push(&mut toks, Tok::RBrace, lo, &mut i, 1),
            ',' => push(&mut toks, Tok::Comma, lo, &mut i, 1),
            '.' => push(&mut toks, Tok::Dot, lo, &mut i, 1),
            ';' => push(&mut toks, Tok::Semi, lo, &mut i, 1),
            '+' => push(&mut toks, Tok::Plus, lo, &mut i, 1),
            '-' => push(&mut toks, Tok::Minus, lo, &mut i, 1),
            '=' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    push(&mut toks, Tok::EqEq, lo, &mut i, 2);
                } else {
                    push(&mut toks, Tok::Assign, lo, &mut i, 1);
                }
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    push(&mut toks, Tok::BangEq, lo, &mut i, 2);
                } else {
                    push(&mut toks, Tok::Bang, lo, &mut i, 1);
                }
            }
            '&' => {
                if bytes.get(i + 1) == Some(&b'&') {
                    push(&mut toks, Tok::AndAnd, lo, &mut i, 2);
                } else {
                    return Err(err(src, lo, "stray '&'"));
                }
            }
            '|' => {
                if bytes.get(i + 1) == Some(&b'|') {
                    push(&mut toks, Tok::ParSep, lo, &mut i, 2);
                } else {
                    return Err(err(src, lo, "stray '|'"));
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    push(&mut toks, Tok::Le, lo, &mut i, 2);
                } else {
                    push(&mut toks, Tok::Lt, lo, &mut i, 1);
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    push(&mut toks, Tok::Ge, lo, &mut i, 2);
                } else {
                    push(&mut toks, Tok::Gt, lo, &mut i, 1);
                }
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let text = &src[start..i];
                let value: i64 = text
                    .parse()
                    .map_err(|_| err(src, lo, "integer literal out of range"))?;
                toks.push(Token { tok: Tok::Int(value), span: Span::new(lo, i as u32) });
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                let text = &src[start..i];
                let tok = match text {
                    "if" => Tok::KwIf,
                    "else" => Tok::KwElse,
                    "return" => Tok::KwReturn,
                    "nil" => Tok::KwNil,
                    "true" => Tok::KwTrue,
                    _ => Tok::Ident(text.to_string()),
                };
                toks.push(Token { tok, span: Span::new(lo, i as u32) });
            }
            _ => return Err(err(src, lo, &format!("unexpected character '{}'", c))),
        }
    }
    Ok(toks)
}

fn push(toks: &mut Vec<Token>, tok: Tok, lo: u32, i: &mut usize, len: usize) {
    toks.push(Token { tok, span: Span::new(lo, lo + len as u32) });
    *i += len;
}

fn err(src: &str, offset: u32, msg: &str) -> ParseError {
    let (line, col) = line_col(src, offset);
    ParseError { line, col, message: msg.to_string() }
}
