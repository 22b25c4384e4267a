use super::{ParseError, SourceSpan};
use crate::formula::Cmp;

#[derive(Debug, Clone, PartialEq)]
pub(super) enum Tok {
    Num(f64),
    Ident(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Caret,
    Bang,
    AndAnd,
    OrOr,
    Cmp(Cmp),
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl Tok {
    pub(super) fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number `{v}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Bang => "`!`".into(),
            Tok::AndAnd => "`&&`".into(),
            Tok::OrOr => "`||`".into(),
            Tok::Cmp(c) => format!("`{}`", c.symbol()),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(super) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub(super) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let mut end = start;
            let mut prev = ' ';
            while let Some(&(i, d)) = chars.peek() {
                let exp_sign = (d == '+' || d == '-') && (prev == 'e' || prev == 'E');
                if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                    end = i + d.len_utf8();
                    prev = d;
                    chars.next();
                } else {
                    break;
                }
            }
            let lit = &text[start..end];
            let span = SourceSpan::new(start, end);
            let v: f64 = lit
                .parse()
                .map_err(|_| ParseError::new(span, format!("malformed number `{lit}`"), vec![]))?;
            out.push(Token {
                tok: Tok::Num(v),
                span,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if d.is_alphanumeric() || d == '_' {
                    end = i + d.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(text[start..end].to_string()),
                span: SourceSpan::new(start, end),
            });
            continue;
        }
        chars.next();
        let next = chars.peek().map(|&(_, d)| d);
        let (tok, len) = match (c, next) {
            ('&', Some('&')) => (Tok::AndAnd, 2),
            ('|', Some('|')) => (Tok::OrOr, 2),
            ('<', Some('=')) => (Tok::Cmp(Cmp::Le), 2),
            ('>', Some('=')) => (Tok::Cmp(Cmp::Ge), 2),
            ('<', _) => (Tok::Cmp(Cmp::Lt), 1),
            ('>', _) => (Tok::Cmp(Cmp::Gt), 1),
            ('≤', _) => (Tok::Cmp(Cmp::Le), 1),
            ('≥', _) => (Tok::Cmp(Cmp::Ge), 1),
            ('!' | '¬', _) => (Tok::Bang, 1),
            ('∧', _) => (Tok::AndAnd, 1),
            ('∨', _) => (Tok::OrOr, 1),
            ('[', _) => (Tok::LBracket, 1),
            (']', _) => (Tok::RBracket, 1),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            ('^', _) => (Tok::Caret, 1),
            ('+', _) => (Tok::Plus, 1),
            ('-', _) => (Tok::Minus, 1),
            ('*', _) => (Tok::Star, 1),
            ('/', _) => (Tok::Slash, 1),
            _ => {
                let span = SourceSpan::new(start, start + c.len_utf8());
                return Err(ParseError::new(
                    span,
                    format!("unexpected character `{c}`"),
                    vec![],
                ));
            }
        };
        let mut end = start + c.len_utf8();
        if len == 2 {
            let (i, d) = chars.next().expect("peeked");
            end = i + d.len_utf8();
        }
        out.push(Token {
            tok,
            span: SourceSpan::new(start, end),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::new(text.len(), text.len()),
    });
    Ok(out)
}
