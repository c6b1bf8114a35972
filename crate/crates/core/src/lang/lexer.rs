use std::fmt;

use super::ast::Span;
use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    /// Unsigned literal; a leading `-` is handled by the parser.
    Int(u64),
    Kw(&'static str),
    Punct(&'static str),
    /// `=` or `:=`
    Assign,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Kw(k) => write!(f, "`{k}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Assign => f.write_str("`=`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub const KEYWORDS: &[&str] = &[
    "module", "listen", "read", "speak", "write", "new", "if", "else", "while", "while_t",
    "while_s", "while_st", "nil", "sn", "sb", "tn", "tb", "true", "false",
];

// longest first so that `<=` wins over `<`
const PUNCT: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "%", "#", "$", ";", ",", ":", "|", "*", "(", ")", "{",
    "}", "<", ">", "+", "-", "/", "!", "@", ".", "[", "]",
];

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text.parse::<u64>().map_err(|_| SyntaxError {
                span,
                message: format!("integer literal {text} is too large"),
            })?;
            col += i - start;
            out.push(Token { tok: Tok::Int(n), span });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match KEYWORDS.iter().find(|k| **k == text) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(text),
            };
            out.push(Token { tok, span });
            continue;
        }
        if c == ':' && chars.get(i + 1) == Some(&'=') {
            out.push(Token { tok: Tok::Assign, span });
            i += 2;
            col += 2;
            continue;
        }
        if c == '=' && chars.get(i + 1) != Some(&'=') {
            out.push(Token { tok: Tok::Assign, span });
            i += 1;
            col += 1;
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                out.push(Token { tok: Tok::Punct(p), span });
                i += p.len();
                col += p.len();
            }
            None => {
                return Err(SyntaxError {
                    span,
                    message: format!("illegal character `{c}`"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
